/*
 * core.hpp — hemi-metric spaces and metric functionals as computable objects.
 *
 * A hemi-metric d satisfies the triangle inequality and separates points but
 * is neither assumed symmetric nor nonnegative off the diagonal.  The
 * symmetrization D(x,y) = max{d(x,y), d(y,x)} is an honest metric and is the
 * only place where generic code symmetrizes.
 *
 * A metric functional is a normalized distance difference
 *
 *     h_x(y) = d(y, x) - d(x0, x),          h_x(x0) = 0,
 *
 * or a pointwise limit of such.  Every functional here satisfies
 *
 *     -d(x0, y) <= h(y) <= d(y, x0)         (two-sided bound)
 *     h(y) - h(z) <= d(y, z)                (directed 1-Lipschitz)
 *
 * and those three laws are what the property suites sample.  Limits are never
 * materialized as a topological space: closed-form families carry their
 * parameters in a tag, finite-horizon anchors are tagged Empirical.
 */

#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace specmet {

// ---------------------------------------------------------------------------
// Error taxonomy.  Names follow the operation contracts: domain errors for
// invalid points, parameter errors for bad arguments, precondition errors for
// violated call contracts, unsupported for spaces a generic op cannot serve.

struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct unsupported_space_error : std::logic_error {
  using std::logic_error::logic_error;
};
struct horizon_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Default tolerance tiers: algebraic identities, geometric limits, ergodic
// (Monte Carlo / Cesaro) limits.
inline constexpr double kAlgebraicTol = 1e-9;
inline constexpr double kGeometricTol = 1e-6;
inline constexpr double kErgodicTol = 1e-3;
inline constexpr double kPointEqTol = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Space concept.  A space owns its point representation, a distinguished base
// point, the hemi-distance, a point-equality predicate (tolerance 1e-12), and
// a validity predicate for its domain.  All operations on spaces are pure;
// space descriptors are immutable and safe to share across threads.

template <class S>
concept MetricSpace = requires(const S& s, const typename S::point_type& x,
                               const typename S::point_type& y) {
  typename S::point_type;
  { s.dist(x, y) } -> std::convertible_to<double>;
  { s.base_point() } -> std::convertible_to<typename S::point_type>;
  { s.point_eq(x, y) } -> std::convertible_to<bool>;
  { s.contains(x) } -> std::convertible_to<bool>;
  { s.name() } -> std::convertible_to<std::string>;
};

// ---------------------------------------------------------------------------
// Metric functionals.  The tag records the parametric family; eval is the
// function itself.  Tags with closed forms keep their parameters so they can
// be serialized as {tag, parameters}.

template <class Space>
struct MetricFunctional {
  using Point = typename Space::point_type;

  struct Internal {
    Point anchor;
  };
  struct HilbertParam {
    double r;  // in [0, inf]; r == kInf marks the linear case
    std::vector<double> v;
  };
  struct DiskBusemann {
    std::complex<double> zeta;  // |zeta| = 1
  };
  struct LinearDual {
    std::vector<double> v;  // ||v|| <= 1
  };
  struct Empirical {
    Point anchor;
    std::size_t record_index;  // orbit index the anchor was taken at
  };

  using Tag = std::variant<Internal, HilbertParam, DiskBusemann, LinearDual, Empirical>;

  Tag tag;
  std::function<double(const Point&)> eval;

  double operator()(const Point& y) const { return eval(y); }

  const char* family_name() const {
    switch (tag.index()) {
      case 0: return "internal";
      case 1: return "hilbert";
      case 2: return "disk-busemann";
      case 3: return "linear-dual";
      default: return "empirical";
    }
  }
};

// ---------------------------------------------------------------------------
// Core operations.

// Symmetrized distance D(x,y) = max{d(x,y), d(y,x)}.
template <MetricSpace S>
double sym_dist(const S& s, const typename S::point_type& x,
                const typename S::point_type& y) {
  if (!s.contains(x) || !s.contains(y))
    throw domain_error("sym_dist: point outside " + s.name());
  return std::max(s.dist(x, y), s.dist(y, x));
}

// h_x(y) = d(y, x) - d(x0, x).
template <MetricSpace S>
MetricFunctional<S> internal_functional(const S& s, typename S::point_type anchor) {
  if (!s.contains(anchor))
    throw domain_error("internal_functional: anchor outside " + s.name());
  const double offset = s.dist(s.base_point(), anchor);
  typename MetricFunctional<S>::Internal tag{anchor};
  return MetricFunctional<S>{
      tag, [&s, anchor = std::move(anchor), offset](const typename S::point_type& y) {
        return s.dist(y, anchor) - offset;
      }};
}

// Gromov product (x,y)_{x0} = (d(x,x0) + d(y,x0) - d(x,y)) / 2.  Only defined
// on symmetric spaces; asymmetry beyond tol on the involved pairs is refused.
template <MetricSpace S>
double gromov_product(const S& s, const typename S::point_type& x,
                      const typename S::point_type& y, double sym_tol = kAlgebraicTol) {
  const auto x0 = s.base_point();
  auto check = [&](const typename S::point_type& a, const typename S::point_type& b) {
    if (std::abs(s.dist(a, b) - s.dist(b, a)) > sym_tol)
      throw unsupported_space_error("gromov_product: asymmetric distance on " + s.name());
  };
  check(x, x0);
  check(y, x0);
  check(x, y);
  return 0.5 * (s.dist(x, x0) + s.dist(y, x0) - s.dist(x, y));
}

// ---------------------------------------------------------------------------
// 1-Lipschitz extension from a finite anchor set, in both extremal forms:
//   sup mode:  f(b) = max_a (f(a) - D(a,b))     (largest extension)
//   inf mode:  f(b) = min_a (f(a) + D(a,b))     (smallest extension)
// Anchored data must be 1-Lipschitz w.r.t. the symmetrized distance; the two
// modes agree on A and bracket every other 1-Lipschitz extension.

enum class ExtendMode { sup, inf };

template <MetricSpace S>
class LipschitzExtension {
 public:
  using Point = typename S::point_type;

  LipschitzExtension(const S& space, std::vector<std::pair<Point, double>> anchors,
                     ExtendMode mode)
      : space_(&space), anchors_(std::move(anchors)), mode_(mode) {
    if (anchors_.empty()) throw parameter_error("lipschitz_extend: empty anchor set");
    for (std::size_t i = 0; i < anchors_.size(); ++i)
      for (std::size_t j = 0; j < anchors_.size(); ++j) {
        if (i == j) continue;
        const double dd = sym_dist(*space_, anchors_[i].first, anchors_[j].first);
        if (anchors_[i].second - anchors_[j].second > dd + 1e-12)
          throw precondition_error("lipschitz_extend: anchor data is not 1-Lipschitz");
      }
  }

  double operator()(const Point& b) const {
    double best = (mode_ == ExtendMode::sup) ? -kInf : kInf;
    for (const auto& [a, fa] : anchors_) {
      const double dd = sym_dist(*space_, a, b);
      if (mode_ == ExtendMode::sup)
        best = std::max(best, fa - dd);
      else
        best = std::min(best, fa + dd);
    }
    return best;
  }

  ExtendMode mode() const { return mode_; }

 private:
  const S* space_;
  std::vector<std::pair<Point, double>> anchors_;
  ExtendMode mode_;
};

template <MetricSpace S>
LipschitzExtension<S> lipschitz_extend(std::vector<std::pair<typename S::point_type, double>> values,
                                       const S& space, ExtendMode mode) {
  return LipschitzExtension<S>(space, std::move(values), mode);
}

// ---------------------------------------------------------------------------
// Geodesic rays and Busemann values along them.

template <class Space>
struct Ray {
  using Point = typename Space::point_type;
  std::function<Point(double)> sample;  // t >= 0
  bool is_geodesic = false;
};

// Wraps a parametrized curve as a Ray, verifying |d(c(s), c(t)) - (t - s)|
// <= tol on a deterministic grid before granting the geodesic flag.
template <MetricSpace S>
Ray<S> verified_ray(const S& space, std::function<typename S::point_type(double)> sample,
                    double t_max, int grid = 12, double tol = kAlgebraicTol) {
  Ray<S> ray{std::move(sample), false};
  for (int i = 0; i <= grid; ++i)
    for (int j = i; j <= grid; ++j) {
      const double si = t_max * i / grid, tj = t_max * j / grid;
      const double d = space.dist(ray.sample(si), ray.sample(tj));
      if (std::abs(d - (tj - si)) > tol) return ray;  // flag stays false
    }
  ray.is_geodesic = true;
  return ray;
}

// Busemann value d(c(T), y) - T at horizon T.  The sequence over increasing T
// is non-increasing and bounded below by -d(x0, y); both are asserted on a
// ladder of intermediate horizons.  The guard tolerance is looser than the
// algebraic tier because evaluating d near an attracting boundary amplifies
// roundoff by 1/(1 - |point|).
template <MetricSpace S>
double busemann_along_ray(const S& space, const Ray<S>& ray,
                          const typename S::point_type& y, double horizon,
                          double tol = 1e-7) {
  if (!ray.is_geodesic) throw precondition_error("busemann_along_ray: ray is not geodesic");
  if (!(horizon > 0)) throw parameter_error("busemann_along_ray: horizon must be positive");
  const auto x0 = ray.sample(0.0);
  const double floor = -space.dist(x0, y);
  constexpr int ladder = 8;
  double prev = kInf, value = 0.0;
  for (int i = 1; i <= ladder; ++i) {
    const double t = horizon * i / ladder;
    value = space.dist(ray.sample(t), y) - t;
    if (value > prev + tol)
      throw precondition_error("busemann_along_ray: values not monotone along ray");
    if (value < floor - tol)
      throw precondition_error("busemann_along_ray: value below -d(x0,y)");
    prev = value;
  }
  return value;
}

}  // namespace specmet
