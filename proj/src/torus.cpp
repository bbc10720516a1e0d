#include "specmet/torus.hpp"

#include "specmet/parallel.hpp"

#include <cmath>
#include <numeric>

namespace specmet {

bool is_primitive(const CurveClass& a) {
  if (a.p == 0 && a.q == 0) return false;
  return std::gcd(std::llabs(a.p), std::llabs(a.q)) == 1;
}

MapClass MapClass::times(const MapClass& o) const {
  MapClass r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
  return r;
}

CurveClass mapclass_act(const MapClass& mc, const CurveClass& a) {
  if (std::llabs(mc.det()) != 1)
    throw parameter_error("mapclass_act: |det| must be 1");
  if (!is_primitive(a)) throw parameter_error("mapclass_act: curve class not primitive");
  return CurveClass{mc.m[0][0] * a.p + mc.m[0][1] * a.q,
                    mc.m[1][0] * a.p + mc.m[1][1] * a.q};
}

Cx act_on_modulus(const MapClass& mc, Cx tau) {
  if (std::llabs(mc.det()) != 1)
    throw parameter_error("act_on_modulus: |det| must be 1");
  if (!(tau.imag() > 0.0)) throw domain_error("act_on_modulus: Im tau must be positive");
  // With M^{-1} proportional to [[d, -b], [-c, a]], the pulled-back modulus is
  // (a tau - b) / (d - c tau); a det -1 class lands in the lower half-plane
  // and is conjugated back.
  const double a = static_cast<double>(mc.m[0][0]);
  const double b = static_cast<double>(mc.m[0][1]);
  const double c = static_cast<double>(mc.m[1][0]);
  const double d = static_cast<double>(mc.m[1][1]);
  Cx out = (a * tau - b) / (d - c * tau);
  if (out.imag() < 0.0) out = std::conj(out);
  return out;
}

QForm q_form(Cx tau) {
  const double im = tau.imag();
  if (!(im > 0.0)) throw domain_error("q_form: Im tau must be positive");
  return QForm{1.0 / im, tau.real() / im, std::norm(tau) / im};
}

Cx tau_from_q(const QForm& q) { return Cx(q.q12 / q.q11, 1.0 / q.q11); }

double torus_length(Cx tau, const CurveClass& a) {
  if (!is_primitive(a)) throw parameter_error("torus_length: curve class not primitive");
  if (!(tau.imag() > 0.0)) throw domain_error("torus_length: Im tau must be positive");
  const double p = static_cast<double>(a.p), q = static_cast<double>(a.q);
  return std::abs(p + q * tau) / std::sqrt(tau.imag());
}

double q_pencil_lambda_max(const QForm& qx, const QForm& qy) {
  // M = Qx^{-1} Qy; for symmetric positive forms the eigenvalues are real
  // positive with product det(Qy)/det(Qx).
  const double detx = qx.q11 * qx.q22 - qx.q12 * qx.q12;
  const double dety = qy.q11 * qy.q22 - qy.q12 * qy.q12;
  // Qx^{-1} = (1/detx) [[q22, -q12], [-q12, q11]].
  const double tr = (qx.q22 * qy.q11 - qx.q12 * qy.q12 +
                     qx.q11 * qy.q22 - qx.q12 * qy.q12) /
                    detx;
  const double det = dety / detx;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return 0.5 * (tr + disc);
}

double thurston_closed(Cx x, Cx y) {
  if (!(x.imag() > 0.0) || !(y.imag() > 0.0))
    throw domain_error("thurston_closed: Im tau must be positive");
  // lambda_max of the unit-determinant pencil is e^{d_H(x,y)} for the
  // half-plane hyperbolic metric, so L is half that distance; the asinh form
  // is stable where the trace/determinant route cancels.
  const double s = std::abs(x - y) / (2.0 * std::sqrt(x.imag() * y.imag()));
  return std::asinh(s);
}

ThurstonEnumerate thurston_enumerate(Cx x, Cx y, int n) {
  if (n < 1) throw parameter_error("thurston_enumerate: n must be >= 1");
  const auto best = par::thurston_scan(q_form(x), q_form(y), n, par::default_exec());
  return ThurstonEnumerate{best.value, CurveClass{best.p, best.q}};
}

QForm congruent_form(const QForm& q, const Mat2& b) {
  // Columns of B hit the form: G = B^T Q B.
  const double c0q0 = q.q11 * b.m00 + q.q12 * b.m10;
  const double c0q1 = q.q12 * b.m00 + q.q22 * b.m10;
  const double c1q0 = q.q11 * b.m01 + q.q12 * b.m11;
  const double c1q1 = q.q12 * b.m01 + q.q22 * b.m11;
  return QForm{b.m00 * c0q0 + b.m10 * c0q1, b.m00 * c1q0 + b.m10 * c1q1,
               b.m01 * c1q0 + b.m11 * c1q1};
}

void TorusProductTracker::push(const MapClass& mc) {
  if (std::llabs(mc.det()) != 1)
    throw parameter_error("torus tracker: |det| must be 1");
  Mat2 next = Mat2::adj_of(mc).times(bhat_.back());
  double s = scale_.back();
  const double m = next.max_abs();
  if (m > 1e8) {
    next.m00 /= m;
    next.m01 /= m;
    next.m10 /= m;
    next.m11 /= m;
    s += std::log(m);
  }
  bhat_.push_back(next);
  scale_.push_back(s);
}

double TorusProductTracker::log_length(std::size_t k, const CurveClass& a) const {
  const Mat2& b = bhat_.at(k);
  const double p = static_cast<double>(a.p), q = static_cast<double>(a.q);
  const double u = b.m00 * p + b.m01 * q;
  const double v = b.m10 * p + b.m11 * q;
  const double quad = u * (q0_.q11 * u + q0_.q12 * v) + v * (q0_.q12 * u + q0_.q22 * v);
  return scale_.at(k) + 0.5 * std::log(quad);
}

double TorusProductTracker::base_dist(std::size_t k) const {
  return dist_from(q0_, k);
}

double TorusProductTracker::dist_from(const QForm& qy, std::size_t k) const {
  const QForm g = congruent_form(q0_, bhat_.at(k));
  return scale_.at(k) + 0.5 * std::log(q_pencil_lambda_max(qy, g));
}

Cx TorusProductTracker::modulus(std::size_t k) const {
  // The true form is e^{2s} G with unit determinant, so the normalized form
  // is G / sqrt(det G) and the scale drops out.  Once det G underflows the
  // modulus is no longer representable; Im clamps to the smallest denormal
  // as a sentinel (distances and lengths remain exact regardless).
  const QForm g = congruent_form(q0_, bhat_.at(k));
  const double det = g.q11 * g.q22 - g.q12 * g.q12;
  const double real = g.q12 / g.q11;
  double imag = (det > 0.0) ? std::sqrt(det) / g.q11 : 0.0;
  if (!(imag > 0.0)) imag = 5e-324;
  return Cx(real, imag);
}

}  // namespace specmet
