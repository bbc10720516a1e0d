// Core module: symmetrization, internal functionals, Gromov products,
// Lipschitz extension, Busemann values along rays, and the sampled
// functional laws.

#include <doctest.h>

#include "specmet/cone.hpp"
#include "specmet/disk.hpp"
#include "specmet/euclidean.hpp"
#include "specmet/parallel.hpp"
#include "specmet/zoo.hpp"

#include <cmath>

using namespace specmet;

namespace {

// Quadrature oracle for the disk: integrate 2 dr / (1 - r^2) along the radius
// with Simpson's rule.
double disk_radial_quadrature(double r, int n = 2000) {
  auto f = [](double t) { return 2.0 / (1.0 - t * t); };
  const double h = r / n;
  double sum = f(0.0) + f(r);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("sym_dist: Funk cone and euclidean examples") {
  PositiveCone funk(2, ConeVariant::funk);
  CHECK(sym_dist(funk, Vec{1.0, 1.0}, Vec{1.0, 1.0}) == doctest::Approx(0.0));
  // d(x,y) = log 2, d(y,x) = log 1 = 0 -> D = log 2.
  CHECK(funk.dist(Vec{2.0, 1.0}, Vec{1.0, 1.0}) == doctest::Approx(std::log(2.0)));
  CHECK(funk.dist(Vec{1.0, 1.0}, Vec{2.0, 1.0}) == doctest::Approx(0.0));
  CHECK(sym_dist(funk, Vec{2.0, 1.0}, Vec{1.0, 1.0}) == doctest::Approx(std::log(2.0)));

  EuclideanPSpace plane(2, 2.0);
  CHECK(sym_dist(plane, Vec{0.0, 0.0}, Vec{3.0, 4.0}) == doctest::Approx(5.0));

  CHECK_THROWS_AS(sym_dist(funk, Vec{1.0, -1.0}, Vec{1.0, 1.0}), domain_error);
}

TEST_CASE("internal_functional: hand values and normalization") {
  EuclideanPSpace line(1, 2.0);
  auto h = internal_functional(line, Vec{3.0});
  CHECK(h(Vec{1.0}) == doctest::Approx(-1.0));  // |1-3| - 3
  CHECK(h(Vec{0.0}) == doctest::Approx(0.0));

  // Anchor at the base point: h = d(., x0).
  auto h0 = internal_functional(line, Vec{0.0});
  CHECK(h0(Vec{-2.5}) == doctest::Approx(2.5));

  EuclideanPSpace plane(2, 2.0);
  auto h2 = internal_functional(plane, Vec{4.0, 0.0});
  CHECK(h2(Vec{4.0, 0.0}) == doctest::Approx(-4.0));
}

TEST_CASE("gromov_product: hand values, coincident points, asymmetry refusal") {
  EuclideanPSpace line(1, 2.0);
  CHECK(gromov_product(line, Vec{3.0}, Vec{5.0}) == doctest::Approx(3.0));
  CHECK(gromov_product(line, Vec{3.0}, Vec{3.0}) == doctest::Approx(3.0));  // = d(x, x0)

  EuclideanPSpace plane(2, 2.0);
  CHECK(gromov_product(plane, Vec{1.0, 0.0}, Vec{0.0, 1.0}) ==
        doctest::Approx((2.0 - std::sqrt(2.0)) / 2.0));

  PositiveCone funk(2, ConeVariant::funk);
  CHECK_THROWS_AS(gromov_product(funk, Vec{2.0, 1.0}, Vec{1.0, 2.0}),
                  unsupported_space_error);
}

TEST_CASE("lipschitz_extend: anchors, both modes, bracketing") {
  EuclideanPSpace line(1, 2.0);

  auto sup1 = lipschitz_extend<EuclideanPSpace>({{Vec{0.0}, 0.0}}, line, ExtendMode::sup);
  auto inf1 = lipschitz_extend<EuclideanPSpace>({{Vec{0.0}, 0.0}}, line, ExtendMode::inf);
  for (double b : {-3.0, -1.0, 0.0, 2.0, 7.5}) {
    CHECK(sup1(Vec{b}) == doctest::Approx(-std::abs(b)));
    CHECK(inf1(Vec{b}) == doctest::Approx(std::abs(b)));
  }

  // Two anchors f(0) = 0, f(10) = 4; sup-mode at b = 5 is max(-5, 4-5) = -1.
  std::vector<std::pair<Vec, double>> anchors = {{Vec{0.0}, 0.0}, {Vec{10.0}, 4.0}};
  auto sup2 = lipschitz_extend(anchors, line, ExtendMode::sup);
  auto inf2 = lipschitz_extend(anchors, line, ExtendMode::inf);
  CHECK(sup2(Vec{5.0}) == doctest::Approx(-1.0));

  // Agreement on anchors and sup <= inf pointwise.
  for (const auto& [a, fa] : anchors) {
    CHECK(sup2(a) == doctest::Approx(fa));
    CHECK(inf2(a) == doctest::Approx(fa));
  }
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vec b{rng.uniform(-20.0, 20.0)};
    CHECK(sup2(b) <= inf2(b) + 1e-12);
  }

  // Both modes are 1-Lipschitz, and they bracket a hand-made 1-Lipschitz
  // extension agreeing on the anchors: g(b) = min(|b|, 4 + 0.4 |b - 10|)
  // is not 1-Lipschitz-compatible; use the inf-extension of a third anchor.
  auto mid = lipschitz_extend<EuclideanPSpace>(
      {{Vec{0.0}, 0.0}, {Vec{10.0}, 4.0}, {Vec{5.0}, -1.0}}, line, ExtendMode::inf);
  for (int i = 0; i < 200; ++i) {
    const Vec b{rng.uniform(-20.0, 20.0)};
    const Vec c{rng.uniform(-20.0, 20.0)};
    CHECK(sup2(b) - sup2(c) <= line.dist(b, c) + 1e-12);
    CHECK(inf2(b) - inf2(c) <= line.dist(b, c) + 1e-12);
    CHECK(sup2(b) <= mid(b) + 1e-12);
    CHECK(mid(b) <= inf2(b) + 1e-12);
  }

  // Non-1-Lipschitz anchor data is refused.
  CHECK_THROWS_AS(lipschitz_extend<EuclideanPSpace>({{Vec{0.0}, 0.0}, {Vec{1.0}, 5.0}},
                                                    line, ExtendMode::sup),
                  precondition_error);
}

TEST_CASE("busemann_along_ray: exact plane values and disk closed form") {
  EuclideanPSpace plane(2, 2.0);
  auto ray = verified_ray<EuclideanPSpace>(
      plane, [](double t) { return Vec{t, 0.0}; }, 50.0);
  REQUIRE(ray.is_geodesic);

  // y = (a, 0), a > 0: exactly -a once T > a.
  CHECK(busemann_along_ray(plane, ray, Vec{3.0, 0.0}, 40.0) == doctest::Approx(-3.0));
  // y = origin of the ray: 0 at every horizon.
  CHECK(busemann_along_ray(plane, ray, Vec{0.0, 0.0}, 10.0) == doctest::Approx(0.0));

  // Values are non-increasing in T.
  const Vec y{1.0, 2.0};
  double prev = kInf;
  for (double t : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double v = busemann_along_ray(plane, ray, y, t);
    CHECK(v <= prev + 1e-12);
    CHECK(v >= -plane.dist(plane.base_point(), y) - 1e-12);
    prev = v;
  }

  // Poincaré disk: ray toward 1, probe 0.5; matches log(1/3) and the
  // closed-form Busemann functional within 1e-6 at horizon 20.
  PoincareDisk disk;
  auto dray = disk_radial_ray(Cx(1.0, 0.0));
  const double v = busemann_along_ray(disk, dray, Cx(0.5, 0.0), 20.0);
  CHECK(v == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-6));
  auto h1 = disk_busemann(Cx(1.0, 0.0));
  CHECK(std::abs(v - h1(Cx(0.5, 0.0))) < 1e-6);

  // Non-geodesic curves are refused.
  auto bent = verified_ray<EuclideanPSpace>(
      plane, [](double t) { return Vec{t * t, 0.0}; }, 5.0);
  CHECK_FALSE(bent.is_geodesic);
  CHECK_THROWS_AS(busemann_along_ray(plane, bent, Vec{1.0, 0.0}, 5.0), precondition_error);
}

TEST_CASE("disk distance: quadrature oracle and Mobius invariance") {
  PoincareDisk disk;
  // d(0, 0.5) = log 3, cross-checked against the length integral.
  CHECK(disk.dist(Cx(0, 0), Cx(0.5, 0)) == doctest::Approx(std::log(3.0)));
  CHECK(disk.dist(Cx(0, 0), Cx(0.5, 0)) ==
        doctest::Approx(disk_radial_quadrature(0.5)).epsilon(1e-9));
  CHECK(disk.dist(Cx(0.3, 0.2), Cx(0.3, 0.2)) == doctest::Approx(0.0));
  CHECK(disk.dist(Cx(0, 0), Cx(0.5, 0)) == doctest::Approx(disk.dist(Cx(0.5, 0), Cx(0, 0))));

  // Möbius disk automorphisms are isometries on sampled pairs.
  auto m = MobiusTransform::from_su11(Cx(1.0, 0.2), Cx(0.3, -0.4));
  auto pts = sample_points(disk, 64, 11);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const double before = disk.dist(pts[i], pts[i + 1]);
    const double after = disk.dist(m.apply(pts[i]), m.apply(pts[i + 1]));
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
  }

  CHECK_THROWS_AS(disk.dist(Cx(1.2, 0), Cx(0, 0)), domain_error);
}

TEST_CASE("metric functional laws hold for internal functionals across spaces") {
  const std::size_t n_pts = 200;
  const auto pairs = sample_pairs(n_pts, 400, 3);

  EuclideanPSpace plane(2, 2.0);
  auto pts_e = sample_points(plane, n_pts, 7);
  auto h_e = internal_functional(plane, Vec{2.0, -1.0});
  auto laws_e = par::functional_law_scan(plane, h_e, pts_e, pairs, par::Exec::serial);
  CHECK(laws_e.worst() < 1e-9);

  PoincareDisk disk;
  auto pts_d = sample_points(disk, n_pts, 7);
  auto h_d = internal_functional(disk, Cx(0.4, 0.3));
  auto laws_d = par::functional_law_scan(disk, h_d, pts_d, pairs, par::Exec::serial);
  CHECK(laws_d.worst() < 1e-9);

  PositiveCone funk(3, ConeVariant::funk);
  auto pts_c = sample_points(funk, n_pts, 7);
  auto h_c = internal_functional(funk, Vec{2.0, 0.7, 1.3});
  auto laws_c = par::functional_law_scan(funk, h_c, pts_c, pairs, par::Exec::serial);
  CHECK(laws_c.worst() < 1e-9);
}

TEST_CASE("triangle inequality and separation on sampled spaces") {
  const auto triples = sample_triples(128, 1000, 13);

  EuclideanPSpace plane(2, 2.0);
  CHECK(par::triangle_scan(plane, sample_points(plane, 128, 23), triples,
                           par::Exec::serial) < 1e-9);

  PoincareDisk disk;
  CHECK(par::triangle_scan(disk, sample_points(disk, 128, 23), triples,
                           par::Exec::serial) < 1e-9);

  PositiveCone funk(3, ConeVariant::funk);
  auto cone_pts = sample_points(funk, 128, 23);
  CHECK(par::triangle_scan(funk, cone_pts, triples, par::Exec::serial) < 1e-9);

  TorusTeich torus;
  CHECK(par::triangle_scan(torus, sample_points(torus, 128, 23), triples,
                           par::Exec::serial) < 1e-9);

  // Separation via the symmetrized metric: distinct points have D > 0.
  for (std::size_t i = 0; i + 1 < cone_pts.size(); i += 2) {
    if (!funk.point_eq(cone_pts[i], cone_pts[i + 1]))
      CHECK(sym_dist(funk, cone_pts[i], cone_pts[i + 1]) > 0.0);
    CHECK(funk.dist(cone_pts[i], cone_pts[i]) == doctest::Approx(0.0));
  }
}
