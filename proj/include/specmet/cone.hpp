/*
 * cone.hpp — Funk and Thompson metrics on the strictly positive orthant.
 *
 *   funk(x, y)     = log max_i x_i / y_i        (asymmetric, can be negative)
 *   thompson(x, y) = max{funk(x,y), funk(y,x)}  (honest metric)
 *
 * funk(x,y) + funk(y,x) is the Hilbert projective distance of the rays.
 * Positive linear maps and coordinatewise concave reparametrizations are
 * nonexpansive for these metrics; see zoo.hpp for the stock examples.
 */

#pragma once

#include "specmet/core.hpp"
#include "specmet/euclidean.hpp"

#include <cmath>
#include <string>

namespace specmet {

enum class ConeVariant { funk, thompson };

inline double funk_dist(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.empty())
    throw parameter_error("funk_dist: dimension mismatch");
  double m = -kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw domain_error("funk_dist: coordinates must be strictly positive");
    m = std::max(m, x[i] / y[i]);
  }
  return std::log(m);
}

inline double thompson_dist(const Vec& x, const Vec& y) {
  return std::max(funk_dist(x, y), funk_dist(y, x));
}

// Hilbert projective distance of the rays through x and y.
inline double hilbert_projective_dist(const Vec& x, const Vec& y) {
  return funk_dist(x, y) + funk_dist(y, x);
}

class PositiveCone {
 public:
  using point_type = Vec;

  PositiveCone(std::size_t dim, ConeVariant variant) : dim_(dim), variant_(variant) {
    if (dim == 0) throw parameter_error("cone: dim must be positive");
  }

  double dist(const Vec& x, const Vec& y) const {
    return variant_ == ConeVariant::funk ? funk_dist(x, y) : thompson_dist(x, y);
  }

  Vec base_point() const { return Vec(dim_, 1.0); }

  bool point_eq(const Vec& x, const Vec& y) const {
    for (std::size_t i = 0; i < dim_; ++i)
      if (std::abs(x[i] - y[i]) > kPointEqTol) return false;
    return true;
  }

  bool contains(const Vec& x) const {
    if (x.size() != dim_) return false;
    for (double xi : x)
      if (!(xi > 0.0) || !std::isfinite(xi)) return false;
    return true;
  }

  std::size_t dim() const { return dim_; }
  ConeVariant variant() const { return variant_; }

  std::string name() const {
    return std::string("cone(") + (variant_ == ConeVariant::funk ? "funk" : "thompson") +
           ",dim=" + std::to_string(dim_) + ")";
  }

 private:
  std::size_t dim_;
  ConeVariant variant_;
};

}  // namespace specmet
