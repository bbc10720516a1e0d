/*
 * disk.hpp — Poincaré disk model: distance, Busemann functionals, Möbius
 * transforms in SU(1,1) form.
 *
 *   metric      ds = 2|dz| / (1 - |z|^2)
 *   distance    d(z,w) = 2 artanh |(z - w) / (1 - conj(z) w)|
 *   Busemann    h_zeta(z) = log( |zeta - z|^2 / (1 - |z|^2) ),  |zeta| = 1
 *
 * A Möbius disk automorphism is kept as (a, b, log_scale) meaning the matrix
 * e^{log_scale} [[a, b], [conj b, conj a]] with true determinant 1.  Long
 * compositions renormalize (a, b) and carry the scale separately, so orbit
 * distances stay exact long after the image points themselves have rounded
 * onto the boundary circle:
 *
 *   d(0, M(0)) = 2 ( log_scale + log(|a| + |b|) ).
 *
 * Orbits of holomorphic non-Möbius self-maps (Blaschke products, z^2, ...)
 * have no group form; callers iterate those in plain complex arithmetic and
 * truncate when points lose resolution against the boundary.
 */

#pragma once

#include "specmet/core.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <string>

namespace specmet {

using Cx = std::complex<double>;

class PoincareDisk {
 public:
  using point_type = Cx;

  double dist(const Cx& z, const Cx& w) const {
    require_inside(z);
    require_inside(w);
    const Cx m = (z - w) / (1.0 - std::conj(z) * w);
    const double r = std::min(std::abs(m), 1.0 - 1e-17);
    return 2.0 * std::atanh(r);
  }

  Cx base_point() const { return Cx(0.0, 0.0); }

  bool point_eq(const Cx& z, const Cx& w) const { return std::abs(z - w) <= kPointEqTol; }

  bool contains(const Cx& z) const {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < 1.0;
  }

  std::string name() const { return "poincare-disk"; }

 private:
  void require_inside(const Cx& z) const {
    if (!contains(z)) throw domain_error("poincare-disk: |z| >= 1");
  }
};

// ---------------------------------------------------------------------------

enum class MobiusKind { identity, elliptic, parabolic, hyperbolic };

class MobiusTransform {
 public:
  // Identity.
  MobiusTransform() : a_(1.0, 0.0), b_(0.0, 0.0), log_scale_(0.0) {}

  // From an SU(1,1)-shaped matrix [[a, b], [conj b, conj a]]; any positive
  // determinant is normalized away.
  static MobiusTransform from_su11(Cx a, Cx b);

  // Convenience forms.
  static MobiusTransform rotation(double theta);          // z -> e^{i theta} z
  static MobiusTransform translation_to(Cx w);            // 0 -> w
  static MobiusTransform hyperbolic_along(Cx dir, double translation_length);
  static MobiusTransform parabolic_fixing(Cx zeta, double t = 1.0);

  MobiusTransform compose(const MobiusTransform& rhs) const;  // this after rhs
  MobiusTransform inverse() const;

  Cx apply(Cx z) const {
    return (a_ * z + b_) / (std::conj(b_) * z + std::conj(a_));
  }

  // d(0, M(0)); exact through the scale carry.
  double dist_from_origin() const {
    return 2.0 * (log_scale_ + std::log(std::abs(a_) + std::abs(b_)));
  }

  // d(M1(0), M2(0)) = d(0, (M1^{-1} M2)(0)).
  static double dist_between(const MobiusTransform& m1, const MobiusTransform& m2) {
    return m1.inverse().compose(m2).dist_from_origin();
  }

  MobiusKind classify(double tol = 1e-9) const;
  // Translation length (hyperbolic maps), 0 otherwise.
  double translation_length() const;
  // Attracting fixed point for parabolic / hyperbolic maps (on the boundary
  // circle); nullopt for elliptic and identity.
  std::optional<Cx> attracting_boundary_point() const;
  // Interior fixed point for elliptic maps.
  std::optional<Cx> interior_fixed_point() const;

  Cx a() const { return a_; }
  Cx b() const { return b_; }
  double log_scale() const { return log_scale_; }

 private:
  MobiusTransform(Cx a, Cx b, double s) : a_(a), b_(b), log_scale_(s) { renormalize(); }
  void renormalize();

  Cx a_, b_;
  double log_scale_;
};

// ---------------------------------------------------------------------------

// Busemann functional of the ray toward a boundary point.
MetricFunctional<PoincareDisk> disk_busemann(Cx zeta);

// Geodesic ray from 0 toward the boundary point zeta: t -> tanh(t/2) zeta.
Ray<PoincareDisk> disk_radial_ray(Cx zeta);

// Degree-2 Blaschke self-map (z^2 + a) / (1 + a z^2), a in (1/3, 1);
// fixed-point free with Denjoy-Wolff point +1.  `mirrored` conjugates by
// z -> -z, moving the attracting point to -1.
std::function<Cx(Cx)> blaschke_squared(double a, bool mirrored = false);

// Orbit-resolution guard (see semicontraction.hpp): plain complex iteration
// stops once a point is too close to the boundary circle to resolve
// hyperbolic distances.  The margin keeps distance evaluations involving the
// last orbit points accurate to ~1e-10 while anchors taken there still
// approximate boundary functionals to ~1e-4 on interior probes.
inline bool orbit_point_resolvable(const PoincareDisk& s, const Cx& z) {
  return s.contains(z) && std::abs(z) < 1.0 - 3e-6;
}

}  // namespace specmet
