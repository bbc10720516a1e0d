// Serial reference vs OpenMP kernels: results must be bit-identical for any
// thread count, because every reduction is a max/min under a total order or
// a per-element map.

#include <doctest.h>

#include "specmet/ergodic.hpp"
#include "specmet/zoo.hpp"

#include <cmath>

using namespace specmet;

TEST_CASE("thurston_scan: parallel equals serial, including the argmax pair") {
  Rng rng(71);
  for (int rep = 0; rep < 25; ++rep) {
    const Cx x(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
    const Cx y(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
    const auto qx = q_form(x), qy = q_form(y);
    const auto s = par::thurston_scan_serial(qx, qy, 60);
    const auto p = par::thurston_scan_parallel(qx, qy, 60);
    CHECK(s.value == p.value);  // bit-exact
    CHECK(s.p == p.p);
    CHECK(s.q == p.q);
  }
}

TEST_CASE("triangle and contraction scans: parallel equals serial bit-exactly") {
  PoincareDisk disk;
  const auto pts = sample_points(disk, 256, 72);
  const auto triples = sample_triples(pts.size(), 4000, 73);
  CHECK(par::triangle_scan_serial(disk, pts, triples) ==
        par::triangle_scan_parallel(disk, pts, triples));

  TorusTeich torus;
  const auto tpts = sample_points(torus, 256, 74);
  CHECK(par::triangle_scan_serial(torus, tpts, triples) ==
        par::triangle_scan_parallel(torus, tpts, triples));

  const auto pairs = sample_pairs(pts.size(), 4000, 75);
  auto blaschke = blaschke_squared(0.5);
  CHECK(par::contraction_scan_serial(disk, blaschke, pts, pairs) ==
        par::contraction_scan_parallel(disk, blaschke, pts, pairs));
}

TEST_CASE("functional law scan: parallel equals serial bit-exactly") {
  EuclideanPSpace h8(8, 2.0);
  const auto pts = sample_points(h8, 512, 76, 5.0);
  const auto pairs = sample_pairs(pts.size(), 2048, 77);
  par::MidpointFn<EuclideanPSpace> mid = [](const Vec& a, const Vec& b, Vec& out) {
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  };
  auto h = hilbert_functional(h8, 1.5, scaled(basis_vec(8, 3), 0.7));
  const auto s = par::functional_law_scan_serial(h8, h, pts, pairs, mid);
  const auto p = par::functional_law_scan_parallel(h8, h, pts, pairs, mid);
  CHECK(s.normalization == p.normalization);
  CHECK(s.upper_bound == p.upper_bound);
  CHECK(s.lower_bound == p.lower_bound);
  CHECK(s.lipschitz == p.lipschitz);
  CHECK(s.convexity == p.convexity);
}

TEST_CASE("displacement scan: parallel equals serial, same argmin index") {
  PoincareDisk disk;
  const auto window = disk_window(0.995, 4096, 78);
  auto f = mobius_map(MobiusTransform::parabolic_fixing(Cx(1, 0)));
  auto apply = [&f](const Cx& z) { return f(z); };
  const auto s = par::displacement_scan_serial(disk, apply, window.samples);
  const auto p = par::displacement_scan_parallel(disk, apply, window.samples);
  CHECK(s.value == p.value);
  CHECK(s.index == p.index);
}

TEST_CASE("km lag scan: parallel equals serial on a mixed cocycle") {
  EuclideanPSpace line(1, 2.0);
  CocycleDriver<EuclideanPSpace> d;
  d.kind = DriverKind::iid;
  d.family = {translation_map(line, {1.0}), translation_map(line, {3.0})};
  d.weights = {0.5, 0.5};
  d.seed = 55;
  auto tr = compose_cocycle(line, d, 800, line.base_point());
  auto engine = tr.engine;
  auto profile = [engine](std::size_t n) { return engine->suffix_profile(n); };
  const double rate = tr.tau_hat() - 0.2;
  const auto s = par::km_lag_scan_serial(tr.horizon(), profile, tr.a, rate);
  const auto p = par::km_lag_scan_parallel(tr.horizon(), profile, tr.a, rate);
  CHECK(s == p);
}
