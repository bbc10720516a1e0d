#include "specmet/disk.hpp"

namespace specmet {

void MobiusTransform::renormalize() {
  const double m = std::max(std::abs(a_), std::abs(b_));
  if (m > 1e8 || (m < 1e-8 && m > 0.0)) {
    a_ /= m;
    b_ /= m;
    log_scale_ += std::log(m);
  }
}

MobiusTransform MobiusTransform::from_su11(Cx a, Cx b) {
  const double det = std::norm(a) - std::norm(b);
  if (!(det > 0.0))
    throw parameter_error("mobius: |a|^2 - |b|^2 must be positive");
  const double t = std::sqrt(det);
  return MobiusTransform(a / t, b / t, 0.0);
}

MobiusTransform MobiusTransform::rotation(double theta) {
  return from_su11(std::polar(1.0, theta / 2.0), Cx(0.0, 0.0));
}

MobiusTransform MobiusTransform::translation_to(Cx w) {
  if (std::abs(w) >= 1.0) throw parameter_error("mobius: translation target outside disk");
  return from_su11(Cx(1.0, 0.0), w);
}

MobiusTransform MobiusTransform::hyperbolic_along(Cx dir, double translation_length) {
  const double m = std::abs(dir);
  if (m == 0.0) throw parameter_error("mobius: zero axis direction");
  // cosh/sinh of half the translation length along the diameter through dir.
  const double h = translation_length / 2.0;
  return from_su11(Cx(std::cosh(h), 0.0), (dir / m) * std::sinh(h));
}

MobiusTransform MobiusTransform::parabolic_fixing(Cx zeta, double t) {
  const double m = std::abs(zeta);
  if (std::abs(m - 1.0) > 1e-12) throw parameter_error("mobius: parabolic point not on circle");
  // Fixes +1: a = 1 + i t, b = -i t; conjugate by rotation to move 1 -> zeta.
  const Cx u = zeta / m;
  return from_su11(Cx(1.0, t), -Cx(0.0, t) * u);
}

MobiusTransform MobiusTransform::compose(const MobiusTransform& rhs) const {
  const Cx a = a_ * rhs.a_ + b_ * std::conj(rhs.b_);
  const Cx b = a_ * rhs.b_ + b_ * std::conj(rhs.a_);
  return MobiusTransform(a, b, log_scale_ + rhs.log_scale_);
}

MobiusTransform MobiusTransform::inverse() const {
  // adj of the normalized part keeps the same scale (true det is 1).
  return MobiusTransform(std::conj(a_), -b_, log_scale_);
}

MobiusKind MobiusTransform::classify(double tol) const {
  if (std::abs(b_) * std::exp(std::min(log_scale_, 300.0)) < tol &&
      std::abs(std::imag(a_)) < tol && log_scale_ < 1.0)
    return MobiusKind::identity;
  // |trace| of the true matrix vs 2; compare in linear scale (classification
  // is only meaningful for directly constructed maps, where the scale is 0).
  const double tr = 2.0 * std::abs(std::real(a_)) * std::exp(log_scale_);
  if (tr > 2.0 + tol) return MobiusKind::hyperbolic;
  if (tr < 2.0 - tol) return MobiusKind::elliptic;
  return MobiusKind::parabolic;
}

double MobiusTransform::translation_length() const {
  const double re = std::abs(std::real(a_)) * std::exp(log_scale_);
  if (re <= 1.0) return 0.0;
  return 2.0 * std::acosh(re);
}

std::optional<Cx> MobiusTransform::attracting_boundary_point() const {
  const auto kind = classify();
  if (kind != MobiusKind::hyperbolic && kind != MobiusKind::parabolic) return std::nullopt;
  // Fixed points solve conj(b) z^2 + (conj(a) - a) z - b = 0.
  const double im = std::imag(a_);
  const double disc = std::norm(b_) - im * im;  // >= 0 here
  const Cx i_im(0.0, im);
  if (kind == MobiusKind::parabolic) {
    return (i_im / std::conj(b_));
  }
  const double root = std::sqrt(std::max(0.0, disc));
  const Cx z1 = (i_im + root) / std::conj(b_);
  const Cx z2 = (i_im - root) / std::conj(b_);
  // Attracting iff |f'(z)| < 1 iff |conj(b) z + conj(a)| > 1.
  const double d1 = std::abs(std::conj(b_) * z1 + std::conj(a_));
  return (d1 > 1.0) ? z1 : z2;
}

std::optional<Cx> MobiusTransform::interior_fixed_point() const {
  const auto kind = classify();
  if (kind == MobiusKind::identity) return Cx(0.0, 0.0);
  if (kind != MobiusKind::elliptic) return std::nullopt;
  if (std::abs(b_) < 1e-15) return Cx(0.0, 0.0);
  const double im = std::imag(a_);
  const double disc = im * im - std::norm(b_);  // > 0 for elliptic
  const Cx i_part(0.0, 1.0);
  const Cx z1 = (Cx(0.0, im) + i_part * std::sqrt(std::max(0.0, disc))) / std::conj(b_);
  const Cx z2 = (Cx(0.0, im) - i_part * std::sqrt(std::max(0.0, disc))) / std::conj(b_);
  return (std::abs(z1) < 1.0) ? z1 : z2;
}

// ---------------------------------------------------------------------------

MetricFunctional<PoincareDisk> disk_busemann(Cx zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
    throw parameter_error("disk_busemann: |zeta| must be 1");
  using MF = MetricFunctional<PoincareDisk>;
  typename MF::DiskBusemann tag{zeta};
  return MF{tag, [zeta](const Cx& z) {
              if (std::abs(z) >= 1.0) throw domain_error("disk_busemann: |z| >= 1");
              return std::log(std::norm(zeta - z) / (1.0 - std::norm(z)));
            }};
}

Ray<PoincareDisk> disk_radial_ray(Cx zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
    throw parameter_error("disk_radial_ray: |zeta| must be 1");
  Ray<PoincareDisk> ray;
  ray.sample = [zeta](double t) { return std::tanh(t / 2.0) * zeta; };
  ray.is_geodesic = true;  // unit-speed radial geodesic by construction
  return ray;
}

std::function<Cx(Cx)> blaschke_squared(double a, bool mirrored) {
  if (!(a > 1.0 / 3.0 && a < 1.0))
    throw parameter_error("blaschke_squared: a must lie in (1/3, 1)");
  if (!mirrored)
    return [a](Cx z) { return (z * z + a) / (1.0 + a * z * z); };
  return [a](Cx z) { return -(z * z + a) / (1.0 + a * z * z); };
}

}  // namespace specmet
