/*
 * semicontraction.hpp — 1-Lipschitz self-maps and their orbit engines.
 *
 * A Semicontraction owns a MapCore.  Cores may expose structure beyond plain
 * application: an exact inverse, a composition fast path, or a specialized
 * OrbitEngine.  The engine abstraction is what keeps long orbits honest:
 * orbit points of boundary-attracted maps lose all floating-point resolution
 * long before the horizons the drift and record-time machinery needs, so
 * engines answer distance queries
 *
 *     a_k = d(x0, f^k x0),   d(f^k x0, f^m x0),   d(y, f^k x0)
 *
 * from whatever representation stays exact (group form, log-scale carries),
 * while point(k) remains a best-effort representative for logging.
 */

#pragma once

#include "specmet/core.hpp"
#include "specmet/rng.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace specmet {

template <class Space>
class OrbitEngine {
 public:
  using Point = typename Space::point_type;
  virtual ~OrbitEngine() = default;

  // Largest valid orbit index (inclusive).  Less than the requested horizon
  // only when the orbit lost numeric resolution (truncated() is then true).
  virtual std::size_t horizon() const = 0;
  virtual bool truncated() const { return false; }

  virtual const Point& point(std::size_t k) const = 0;
  virtual double base_dist(std::size_t k) const = 0;              // d(x0, f^k x0)
  virtual double pair_dist(std::size_t k, std::size_t m) const = 0;  // d(f^k x0, f^m x0)
  virtual double dist_to(std::size_t k, const Point& y) const = 0;   // d(y, f^k x0)
};

// ---------------------------------------------------------------------------

template <class Space>
class MapCore {
 public:
  using Point = typename Space::point_type;
  virtual ~MapCore() = default;

  virtual Point apply(const Point& x) const = 0;
  virtual bool is_isometry() const { return false; }

  // Exact inverse when the map has one (isometries of the zoo do).
  virtual std::shared_ptr<const MapCore> inverse_core() const { return nullptr; }

  // Structured composition this∘inner, or nullptr when no fast path exists.
  virtual std::shared_ptr<const MapCore> compose_core(
      const std::shared_ptr<const MapCore>& /*inner*/) const {
    return nullptr;
  }

  // Specialized orbit engine, or nullptr for the generic point-iterating one.
  virtual std::shared_ptr<OrbitEngine<Space>> make_engine(const Space& /*s*/,
                                                          const Point& /*x0*/,
                                                          std::size_t /*horizon*/) const {
    return nullptr;
  }
};

template <class Space>
class GenericMapCore final : public MapCore<Space> {
 public:
  using Point = typename Space::point_type;
  GenericMapCore(std::function<Point(const Point&)> fn, bool isometry)
      : fn_(std::move(fn)), isometry_(isometry) {}
  Point apply(const Point& x) const override { return fn_(x); }
  bool is_isometry() const override { return isometry_; }

 private:
  std::function<Point(const Point&)> fn_;
  bool isometry_;
};

// ---------------------------------------------------------------------------
// Orbit-resolution guard: points too degraded to yield meaningful distances
// stop the generic engine.  Spaces with boundary-attracted orbits override.

template <class S>
bool orbit_point_resolvable(const S& s, const typename S::point_type& p) {
  return s.contains(p);
}

// ---------------------------------------------------------------------------

template <class Space>
struct MapOracle {
  using Point = typename Space::point_type;
  std::optional<double> tau;           // exact drift
  std::optional<double> displacement;  // exact d(f)
  std::optional<Point> fixed_point;
  std::optional<Point> boundary_point;  // attracting boundary point, if any
  std::string provenance;
};

template <class Space>
class Semicontraction {
 public:
  using Point = typename Space::point_type;

  Semicontraction() = default;
  Semicontraction(std::string label, std::shared_ptr<const MapCore<Space>> core,
                  MapOracle<Space> oracle = {})
      : label_(std::move(label)), core_(std::move(core)), oracle_(std::move(oracle)) {}

  static Semicontraction from_function(std::string label,
                                       std::function<Point(const Point&)> fn,
                                       bool isometry = false,
                                       MapOracle<Space> oracle = {}) {
    return Semicontraction(std::move(label),
                           std::make_shared<GenericMapCore<Space>>(std::move(fn), isometry),
                           std::move(oracle));
  }

  Point operator()(const Point& x) const { return core_->apply(x); }

  const std::string& label() const { return label_; }
  const MapOracle<Space>& oracle() const { return oracle_; }
  MapOracle<Space>& oracle() { return oracle_; }
  const std::shared_ptr<const MapCore<Space>>& core() const { return core_; }
  bool is_isometry() const { return core_->is_isometry(); }

  std::optional<Semicontraction> inverse() const {
    auto inv = core_->inverse_core();
    if (!inv) return std::nullopt;
    return Semicontraction(label_ + "^-1", std::move(inv));
  }

 private:
  std::string label_;
  std::shared_ptr<const MapCore<Space>> core_;
  MapOracle<Space> oracle_;
};

// f∘g; keeps the structured form when the cores provide one.
template <class Space>
Semicontraction<Space> compose(const Semicontraction<Space>& f,
                               const Semicontraction<Space>& g) {
  const std::string label = f.label() + "∘" + g.label();
  if (auto fast = f.core()->compose_core(g.core()))
    return Semicontraction<Space>(label, std::move(fast));
  auto fc = f.core();
  auto gc = g.core();
  const bool iso = fc->is_isometry() && gc->is_isometry();
  return Semicontraction<Space>::from_function(
      label,
      [fc, gc](const typename Space::point_type& x) { return fc->apply(gc->apply(x)); },
      iso);
}

// ---------------------------------------------------------------------------
// Generic engine: iterate and store.  Stops early (truncates) when the next
// point is no longer resolvable in its floating-point representation.

template <class Space>
class GenericOrbitEngine final : public OrbitEngine<Space> {
 public:
  using Point = typename Space::point_type;

  GenericOrbitEngine(const Space& s, const MapCore<Space>& core, Point x0,
                     std::size_t horizon)
      : space_(&s) {
    points_.reserve(horizon + 1);
    points_.push_back(std::move(x0));
    if (!s.contains(points_[0]))
      throw domain_error("orbit: starting point outside " + s.name());
    for (std::size_t k = 0; k < horizon; ++k) {
      Point next = core.apply(points_.back());
      if (!orbit_point_resolvable(s, next)) {
        truncated_ = true;
        break;
      }
      points_.push_back(std::move(next));
    }
  }

  std::size_t horizon() const override { return points_.size() - 1; }
  bool truncated() const override { return truncated_; }
  const Point& point(std::size_t k) const override { return points_.at(k); }
  double base_dist(std::size_t k) const override {
    return space_->dist(points_.at(0), points_.at(k));
  }
  double pair_dist(std::size_t k, std::size_t m) const override {
    return space_->dist(points_.at(k), points_.at(m));
  }
  double dist_to(std::size_t k, const Point& y) const override {
    return space_->dist(y, points_.at(k));
  }

 private:
  const Space* space_;
  std::vector<Point> points_;
  bool truncated_ = false;
};

template <class Space>
std::shared_ptr<OrbitEngine<Space>> make_orbit_engine(const Space& s,
                                                      const Semicontraction<Space>& f,
                                                      typename Space::point_type x0,
                                                      std::size_t horizon) {
  if (auto special = f.core()->make_engine(s, x0, horizon)) return special;
  return std::make_shared<GenericOrbitEngine<Space>>(s, *f.core(), std::move(x0), horizon);
}

}  // namespace specmet
