/*
 * torus.hpp — Teichmüller space of unit-area flat tori with the Thurston
 * metric, realized on the upper half-plane modulus tau.
 *
 *   length       l_tau(p, q) = |p + q tau| / sqrt(Im tau),  (p, q) primitive
 *   Gram form    Q(tau) = (1/Im tau) [[1, Re tau], [Re tau, |tau|^2]],
 *                unit determinant, l_tau(a)^2 = a^T Q(tau) a
 *   distance     L(x, y) = log sup_a l_y(a) / l_x(a)
 *                        = (1/2) log lambda_max(Q(x)^{-1} Q(y))
 *
 * The sup over primitive integer pairs equals the sup over real directions,
 * so the curve enumeration converges to the closed form from below.  On the
 * torus the eigenvalues of Q(x)^{-1} Q(y) come in reciprocal pairs, making L
 * symmetric here.
 *
 * Mapping classes are integer matrices with |det| = 1.  They act on curves by
 * M a and on moduli by the pull-back rule l_{M.tau}(a) = l_tau(M^{-1} a).
 */

#pragma once

#include "specmet/core.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace specmet {

using Cx = std::complex<double>;

struct CurveClass {
  std::int64_t p = 0, q = 0;

  bool operator==(const CurveClass&) const = default;
  // Spec order for tie-breaks: lexicographic on (p, q).
  bool operator<(const CurveClass& o) const {
    return p != o.p ? p < o.p : q < o.q;
  }
  // (p, q) ~ (-p, -q); canonical has q > 0, or q == 0 and p > 0.
  CurveClass canonical() const {
    if (q > 0 || (q == 0 && p > 0)) return *this;
    return {-p, -q};
  }
};

bool is_primitive(const CurveClass& a);

struct MapClass {
  std::int64_t m[2][2] = {{1, 0}, {0, 1}};

  std::int64_t det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  MapClass times(const MapClass& o) const;
  bool operator==(const MapClass&) const = default;
};

// M a; requires |det M| = 1 and a primitive.  Unimodularity preserves
// primitivity.
CurveClass mapclass_act(const MapClass& mc, const CurveClass& a);

// Induced action on the modulus, det -1 classes conjugate back into the
// upper half-plane.
Cx act_on_modulus(const MapClass& mc, Cx tau);

// Unit-determinant Gram form of the unit-area torus.
struct QForm {
  double q11 = 1.0, q12 = 0.0, q22 = 1.0;
};

QForm q_form(Cx tau);
Cx tau_from_q(const QForm& q);  // assumes det ~ 1

double torus_length(Cx tau, const CurveClass& a);
inline double torus_log_length(const QForm& q, double ap, double aq) {
  return 0.5 * std::log(ap * (q.q11 * ap + q.q12 * aq) + aq * (q.q12 * ap + q.q22 * aq));
}

// lambda_max of Q(x)^{-1} Q(y) for 2x2 symmetric positive forms.
double q_pencil_lambda_max(const QForm& qx, const QForm& qy);

// Closed-form Thurston distance.
double thurston_closed(Cx x, Cx y);

struct ThurstonEnumerate {
  double value = 0.0;       // log of the best ratio found
  CurveClass arg;           // realizing curve (canonical, lex-smallest on ties)
};

// Sup of log l_y(a)/l_x(a) over canonical primitive pairs with |p|,|q| <= n.
// Monotone in n and converges to thurston_closed from below.
ThurstonEnumerate thurston_enumerate(Cx x, Cx y, int n);

// ---------------------------------------------------------------------------
// Log-scale product tracker for mapping-class words.  B_k = adj(M_0 ... M_{k-1})
// is kept as e^{s_k} B̂_k with renormalized entries, so curve lengths and
// Thurston distances of the word's image of the base point stay exact far past
// the horizon where Im tau itself underflows:
//
//   Q_k           = e^{2 s_k} B̂_k^T Q0 B̂_k      (Gram form of Z_k x0)
//   log l_{Z_k x0}(a) = s_k + (1/2) log( (B̂_k a)^T Q0 (B̂_k a) )
//   L(x0, Z_k x0)     = s_k + (1/2) log lambda_max(Q0^{-1} B̂_k^T Q0 B̂_k)

struct Mat2 {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

  static Mat2 adj_of(const MapClass& mc) {
    return Mat2{static_cast<double>(mc.m[1][1]), static_cast<double>(-mc.m[0][1]),
                static_cast<double>(-mc.m[1][0]), static_cast<double>(mc.m[0][0])};
  }
  Mat2 times(const Mat2& o) const {
    return Mat2{m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  double max_abs() const {
    return std::max(std::max(std::abs(m00), std::abs(m01)),
                    std::max(std::abs(m10), std::abs(m11)));
  }
};

// B̂^T Q B̂ as a QForm (det is whatever it is; downstream pencil code copes).
QForm congruent_form(const QForm& q, const Mat2& b);

class TorusProductTracker {
 public:
  explicit TorusProductTracker(Cx x0) : q0_(q_form(x0)) {
    bhat_.push_back(Mat2{});
    scale_.push_back(0.0);
  }

  // Append the next word letter (rightmost factor of the composition).
  void push(const MapClass& mc);

  std::size_t size() const { return bhat_.size() - 1; }  // word length so far
  const QForm& base_form() const { return q0_; }

  double log_length(std::size_t k, const CurveClass& a) const;
  double base_dist(std::size_t k) const;                  // L(x0, Z_k x0)
  double dist_from(const QForm& qy, std::size_t k) const;  // L(y, Z_k x0)
  Cx modulus(std::size_t k) const;  // representative; Im clamps near underflow

 private:
  QForm q0_;
  std::vector<Mat2> bhat_;
  std::vector<double> scale_;
};

class TorusTeich {
 public:
  using point_type = Cx;

  double dist(const Cx& x, const Cx& y) const {
    require_modulus(x);
    require_modulus(y);
    return thurston_closed(x, y);
  }

  Cx base_point() const { return Cx(0.0, 1.0); }

  bool point_eq(const Cx& x, const Cx& y) const { return std::abs(x - y) <= kPointEqTol; }

  bool contains(const Cx& x) const {
    return std::isfinite(x.real()) && std::isfinite(x.imag()) && x.imag() > 0.0;
  }

  std::string name() const { return "torus-teich"; }

 private:
  void require_modulus(const Cx& x) const {
    if (!contains(x)) throw domain_error("torus-teich: Im tau must be positive");
  }
};

}  // namespace specmet
