/*
 * zoo.hpp — the stock spaces, point samplers, search windows and maps the
 * property suites and the invariants experiment run over.  Everything is
 * seeded; samplers are pure functions of (space, seed, count).
 */

#pragma once

#include "specmet/ergodic.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace specmet {

// ---------------------------------------------------------------------------
// Point samplers.

inline std::vector<Vec> sample_points(const EuclideanPSpace& s, std::size_t count,
                                      std::uint64_t seed, double radius = 4.0) {
  Rng rng(seed);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(rng.vector(s.dim(), -radius, radius));
  return pts;
}

inline std::vector<Cx> sample_points(const PoincareDisk&, std::size_t count,
                                     std::uint64_t seed, double radius = 0.9) {
  Rng rng(seed);
  std::vector<Cx> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = radius * std::sqrt(rng.uniform01());
    const double phi = rng.uniform(0.0, 6.283185307179586);
    pts.push_back(std::polar(r, phi));
  }
  return pts;
}

inline std::vector<Vec> sample_points(const PositiveCone& s, std::size_t count,
                                      std::uint64_t seed, double log_radius = 2.0) {
  Rng rng(seed);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec x(s.dim());
    for (auto& xi : x) xi = std::exp(rng.uniform(-log_radius, log_radius));
    pts.push_back(std::move(x));
  }
  return pts;
}

inline std::vector<Mat> sample_points(const OperatorSpace& s, std::size_t count,
                                      std::uint64_t seed, double spread = 0.4) {
  Rng rng(seed);
  std::vector<Mat> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    Mat m = Mat::Identity(s.dim(), s.dim());
    for (Eigen::Index i = 0; i < s.dim(); ++i)
      for (Eigen::Index j = 0; j < s.dim(); ++j) m(i, j) += rng.uniform(-spread, spread);
    if (s.contains(m)) pts.push_back(std::move(m));
  }
  return pts;
}

inline std::vector<Cx> sample_points(const TorusTeich&, std::size_t count,
                                     std::uint64_t seed, double /*unused*/ = 0.0) {
  Rng rng(seed);
  std::vector<Cx> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    pts.push_back(Cx(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0)));
  return pts;
}

// Index tuples for the sweep kernels.
inline std::vector<std::array<std::uint32_t, 3>> sample_triples(std::size_t n_points,
                                                                std::size_t count,
                                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::array<std::uint32_t, 3>> out(count);
  for (auto& t : out)
    t = {static_cast<std::uint32_t>(rng.index(n_points)),
         static_cast<std::uint32_t>(rng.index(n_points)),
         static_cast<std::uint32_t>(rng.index(n_points))};
  return out;
}

inline std::vector<std::array<std::uint32_t, 2>> sample_pairs(std::size_t n_points,
                                                              std::size_t count,
                                                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::array<std::uint32_t, 2>> out(count);
  for (auto& p : out)
    p = {static_cast<std::uint32_t>(rng.index(n_points)),
         static_cast<std::uint32_t>(rng.index(n_points))};
  return out;
}

// ---------------------------------------------------------------------------
// Search windows for displacement scans.

inline SearchWindow<EuclideanPSpace> euclidean_window(const EuclideanPSpace& s, double radius,
                                                      std::size_t samples, std::uint64_t seed) {
  SearchWindow<EuclideanPSpace> w;
  w.samples = sample_points(s, samples, seed, radius);
  w.description = "box |x_i| <= " + std::to_string(radius);
  w.interior = [radius, &s](const Vec& x) { return norm2(x) < 0.9 * radius * std::sqrt(double(s.dim())); };
  const double diag = radius * std::sqrt(static_cast<double>(s.dim()));
  w.depth = [diag](const Vec& x) { return norm2(x) / diag; };
  w.perturb = [](const Vec& x, double scale, Rng& rng) {
    Vec y = x;
    for (auto& yi : y) yi += scale * rng.normal();
    return y;
  };
  return w;
}

inline SearchWindow<PoincareDisk> disk_window(double radius, std::size_t samples,
                                              std::uint64_t seed) {
  SearchWindow<PoincareDisk> w;
  Rng rng(seed);
  w.samples.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    // Uniform in hyperbolic-ish depth: bias samples toward the rim, where
    // parabolic displacement keeps improving.
    const double r = radius * std::pow(rng.uniform01(), 0.35);
    w.samples.push_back(std::polar(r, rng.uniform(0.0, 6.283185307179586)));
  }
  w.description = "disk |z| <= " + std::to_string(radius);
  w.interior = [radius](const Cx& z) { return std::abs(z) < 0.85 * radius; };
  w.depth = [radius](const Cx& z) { return std::abs(z) / radius; };
  w.perturb = [radius](const Cx& z, double scale, Rng& rng) {
    const double room = std::max(1e-6, radius - std::abs(z));
    Cx y = z + 0.5 * scale * room * Cx(rng.normal(), rng.normal());
    const double r = std::abs(y);
    return (r < radius) ? y : y * (radius * (1.0 - 1e-9) / r);
  };
  return w;
}

inline SearchWindow<PositiveCone> cone_window(const PositiveCone& s, double log_radius,
                                              std::size_t samples, std::uint64_t seed) {
  SearchWindow<PositiveCone> w;
  w.samples = sample_points(s, samples, seed, log_radius);
  w.description = "cone |log x_i| <= " + std::to_string(log_radius);
  auto log_norm = [](const Vec& x) {
    double m = 0.0;
    for (double xi : x) m = std::max(m, std::abs(std::log(xi)));
    return m;
  };
  w.interior = [log_radius, log_norm](const Vec& x) { return log_norm(x) < 0.9 * log_radius; };
  w.depth = [log_radius, log_norm](const Vec& x) { return log_norm(x) / log_radius; };
  w.perturb = [](const Vec& x, double scale, Rng& rng) {
    Vec y = x;
    for (auto& yi : y) yi *= std::exp(scale * rng.normal());
    return y;
  };
  return w;
}

// ---------------------------------------------------------------------------
// Stock maps with oracles.

struct EuclideanZoo {
  EuclideanPSpace plane{2, 2.0};
  std::vector<Semicontraction<EuclideanPSpace>> maps;

  EuclideanZoo() {
    maps.push_back(translation_map(plane, {3.0, 4.0}));
    maps.push_back(rotation_map(plane, 1.0));
    maps.push_back(scale_map(plane, 0.5));
  }
};

struct DiskZoo {
  PoincareDisk disk;
  Semicontraction<PoincareDisk> hyperbolic =
      mobius_map_from_matrix(Cx(1.0, 0.0), Cx(0.5, 0.0), "mobius-hyperbolic");
  Semicontraction<PoincareDisk> rotation = mobius_map(MobiusTransform::rotation(1.0), "mobius-rotation");
  Semicontraction<PoincareDisk> parabolic =
      mobius_map(MobiusTransform::parabolic_fixing(Cx(1.0, 0.0)), "mobius-parabolic");
  Semicontraction<PoincareDisk> blaschke = blaschke_map(0.5);
  Semicontraction<PoincareDisk> square = squaring_map();

  std::vector<Semicontraction<PoincareDisk>> all() const {
    return {hyperbolic, rotation, parabolic, blaschke, square};
  }

  // The Wolff-Denjoy bench: fixed-point-free with exponential attraction.
  std::vector<Semicontraction<PoincareDisk>> fixed_point_free() const {
    return {hyperbolic,
            mobius_map_from_matrix(Cx(1.0, 0.0), Cx(0.0, 0.5), "mobius-hyperbolic-i"),
            mobius_map_from_matrix(Cx(1.0, 0.0), Cx(-0.6, 0.0), "mobius-hyperbolic-neg"),
            blaschke_map(0.5), blaschke_map(0.45, true)};
  }
};

struct ConeZoo {
  PositiveCone funk{3, ConeVariant::funk};
  PositiveCone thompson{3, ConeVariant::thompson};
  std::vector<Semicontraction<PositiveCone>> funk_maps;
  std::vector<Semicontraction<PositiveCone>> thompson_maps;

  ConeZoo() {
    // coord_pow scales the ray metric by theta, which is expansive on the
    // negative part of the asymmetric Funk distance; it is a semicontraction
    // only for the Thompson variant.
    funk_maps.push_back(diag_scale_map(funk, {2.0, 0.5, 1.0}));
    Eigen::MatrixXd a(3, 3);
    a << 2.0, 1.0, 0.5, 1.0, 1.0, 0.5, 0.5, 0.5, 1.0;
    funk_maps.push_back(positive_linear_map(funk, a, false));
    thompson_maps.push_back(diag_scale_map(thompson, {2.0, 0.5, 1.0}));
    thompson_maps.push_back(coord_pow_map(thompson, 0.5));
    thompson_maps.push_back(positive_linear_map(thompson, a));
  }
};

struct OperatorZoo {
  OperatorSpace space{2};
  std::vector<Semicontraction<OperatorSpace>> maps;

  OperatorZoo() {
    Mat d(2, 2), r(2, 2);
    d << 2.0, 0.0, 0.0, 0.5;
    const double c = std::cos(0.7), s_ = std::sin(0.7);
    r << c, -s_, s_, c;
    maps.push_back(left_mult_map(space, d, "left-mult-diag"));
    maps.push_back(left_mult_map(space, r, "left-mult-rot"));
    maps.push_back(left_mult_map(space, Mat(d * r), "left-mult-mixed"));
  }
};

struct TorusZoo {
  TorusTeich space;
  Semicontraction<TorusTeich> anosov = torus_class_map(MapClass{{{2, 1}, {1, 1}}}, "anosov");
  Semicontraction<TorusTeich> order4 = torus_class_map(MapClass{{{0, -1}, {1, 0}}}, "order-4");
  Semicontraction<TorusTeich> shear = torus_class_map(MapClass{{{1, 1}, {0, 1}}}, "shear");

  std::vector<Semicontraction<TorusTeich>> all() const { return {anosov, order4, shear}; }
};

}  // namespace specmet
