/*
 * euclidean.hpp — finite-dimensional normed spaces (R^d, p in [1, inf]) and
 * the closed-form functional catalog of the p = 2 case:
 *
 *   h_{r,v}(y) = sqrt(||y||^2 - 2 r (y,v) + r^2) - r     0 < r < inf, ||v|| <= 1
 *   h_0(y)     = ||y||                                    r = 0
 *   h_{inf,v}(y) = -(y, v)                                r = inf
 *
 * Everything in the catalog is convex, normalized at 0, and 1-Lipschitz.
 * Weak-limit phenomena are modeled in finite dimension by declared limits:
 * the classifier checks a sampled sequence against the declared (r, v) on a
 * probe set instead of inferring a limit.
 */

#pragma once

#include "specmet/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace specmet {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline Vec basis_vec(std::size_t dim, std::size_t i, double value = 1.0) {
  Vec e(dim, 0.0);
  e.at(i) = value;
  return e;
}

class EuclideanPSpace {
 public:
  using point_type = Vec;

  EuclideanPSpace(std::size_t dim, double p) : dim_(dim), p_(p) {
    if (dim == 0) throw parameter_error("euclidean: dim must be positive");
    if (!(p >= 1.0)) throw parameter_error("euclidean: p must be >= 1");
  }

  double norm(const Vec& x) const {
    if (p_ == 2.0) return norm2(x);
    if (p_ == kInf) {
      double m = 0.0;
      for (double xi : x) m = std::max(m, std::abs(xi));
      return m;
    }
    if (p_ == 1.0) {
      double s = 0.0;
      for (double xi : x) s += std::abs(xi);
      return s;
    }
    double s = 0.0;
    for (double xi : x) s += std::pow(std::abs(xi), p_);
    return std::pow(s, 1.0 / p_);
  }

  // Allocation-free: the sweeps hammer this from several threads.
  double dist(const Vec& x, const Vec& y) const {
    if (p_ == 2.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - x[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    if (p_ == kInf) {
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(y[i] - x[i]));
      return m;
    }
    if (p_ == 1.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(y[i] - x[i]);
      return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(y[i] - x[i]), p_);
    return std::pow(s, 1.0 / p_);
  }

  Vec base_point() const { return Vec(dim_, 0.0); }

  bool point_eq(const Vec& x, const Vec& y) const {
    for (std::size_t i = 0; i < dim_; ++i)
      if (std::abs(x[i] - y[i]) > kPointEqTol) return false;
    return true;
  }

  bool contains(const Vec& x) const {
    if (x.size() != dim_) return false;
    for (double xi : x)
      if (!std::isfinite(xi)) return false;
    return true;
  }

  std::size_t dim() const { return dim_; }
  double p() const { return p_; }

  std::string name() const {
    return "euclidean(dim=" + std::to_string(dim_) +
           ",p=" + (p_ == kInf ? std::string("inf") : std::to_string(p_)) + ")";
  }

 private:
  std::size_t dim_;
  double p_;
};

// ---------------------------------------------------------------------------
// Hilbert functional catalog (p = 2 only).

inline MetricFunctional<EuclideanPSpace> hilbert_functional(const EuclideanPSpace& s,
                                                            double r, Vec v) {
  if (s.p() != 2.0)
    throw unsupported_space_error("hilbert_functional: requires p = 2");
  if (v.size() != s.dim()) throw parameter_error("hilbert_functional: bad v dimension");
  const double nv = norm2(v);
  if (nv > 1.0 + 1e-12) throw parameter_error("hilbert_functional: ||v|| > 1");
  if (!(r >= 0.0)) throw parameter_error("hilbert_functional: r must be >= 0");

  using MF = MetricFunctional<EuclideanPSpace>;
  if (r == kInf) {
    typename MF::LinearDual tag{v};
    return MF{tag, [v = std::move(v)](const Vec& y) { return -dot(y, v); }};
  }
  if (r == 0.0) {
    typename MF::HilbertParam tag{0.0, Vec(s.dim(), 0.0)};
    return MF{tag, [](const Vec& y) { return norm2(y); }};
  }
  typename MF::HilbertParam tag{r, v};
  return MF{tag, [r, v = std::move(v)](const Vec& y) {
              return std::sqrt(std::max(0.0, dot(y, y) - 2.0 * r * dot(y, v) + r * r)) - r;
            }};
}

// ---------------------------------------------------------------------------
// Declared-limit classification of a sampled sequence h_{t_i v_i}.
//
// The caller states the limit (t_i -> r, weak limit v); the classifier builds
// the closed-form limit functional and checks that the sampled functionals
// converge to it pointwise on the probe set (errors over the tail must be
// below tol).  Nothing is inferred: an inconsistent declaration throws.

struct HilbertSeqSample {
  double t;
  Vec v;  // unit vector
};

inline MetricFunctional<EuclideanPSpace> hilbert_limit_classifier(
    const EuclideanPSpace& s, const std::vector<HilbertSeqSample>& seq,
    double declared_r, Vec declared_v, const std::vector<Vec>& probes,
    double tol = kGeometricTol) {
  if (seq.empty()) throw parameter_error("hilbert_limit_classifier: empty sequence");
  if (probes.empty()) throw parameter_error("hilbert_limit_classifier: empty probe set");
  for (const auto& smp : seq)
    if (std::abs(norm2(smp.v) - 1.0) > 1e-9)
      throw parameter_error("hilbert_limit_classifier: sequence vectors must be unit");

  auto limit = (declared_r == 0.0)
                   ? hilbert_functional(s, 0.0, Vec(s.dim(), 0.0))
                   : hilbert_functional(s, declared_r, std::move(declared_v));

  // Tail check: max error over the last quarter of the sequence on all probes.
  const std::size_t tail_start = seq.size() - std::max<std::size_t>(1, seq.size() / 4);
  double tail_err = 0.0;
  for (std::size_t i = tail_start; i < seq.size(); ++i) {
    auto hi = hilbert_functional(s, seq[i].t, seq[i].v);
    for (const auto& y : probes) tail_err = std::max(tail_err, std::abs(hi(y) - limit(y)));
  }
  if (tail_err > tol)
    throw precondition_error(
        "hilbert_limit_classifier: sampled sequence does not approach the declared "
        "limit (tail error " +
        std::to_string(tail_err) + ")");
  return limit;
}

}  // namespace specmet
