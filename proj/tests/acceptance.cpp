// Acceptance suite: one line per criterion, exit code = number of failures.
//
// Criterion 6 (curve enumeration at N = 50 within 1e-6 of the closed form
// over the stated window) is retained exactly as specified even though the
// box resolution near steep optimal directions caps the achievable accuracy
// at ~1/N^2; the supplementary line shows the same pairs closing below 1e-6
// at N = 800.  Criterion 7 reads the growth rate as the successive-ratio
// (power-iteration) estimator its oracle names; the Cesaro average is
// printed alongside.

#include "specmet/experiments.hpp"
#include "specmet/zoo.hpp"

#include <chrono>
#include <cstdio>
#include <string>

using namespace specmet;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void line(const std::string& id, bool pass, double secs, double budget,
          const std::string& detail) {
  const bool ok = pass && secs < budget;
  if (!ok) ++failures;
  std::printf("%-4s %s  (%s; %.2fs of %.0fs budget)\n", id.c_str(),
              ok ? "PASS" : "FAIL", detail.c_str(), secs, budget);
}

void ac1_drift_exactness() {
  Timer t;
  EuclideanPSpace plane(2, 2.0);
  auto tr = orbit(plane, translation_map(plane, {3.0, 4.0}), plane.base_point(), 1000);
  bool exact = true;
  double fekete = kInf;
  for (std::size_t n = 1; n <= tr.horizon; ++n) {
    const double ratio = tr.a[n] / static_cast<double>(n);
    fekete = std::min(fekete, ratio);
    exact = exact && (ratio == 5.0) && (fekete == 5.0);
  }
  line("AC1", exact, t.seconds(), 1.0, "translation drift a_n/n = 5 exactly at every n");
}

void ac2_spectral_certificate() {
  Timer t;
  PoincareDisk disk;
  auto f = mobius_map_from_matrix(Cx(1.0, 0.0), Cx(0.5, 0.0));
  auto ext = extract_functional(disk, f, disk.base_point(), {}, 1000);
  const double log3 = std::log(3.0);
  const double eps = std::ldexp(1.0, -10);
  bool pass = std::abs(ext.drift.tau_hat - log3) < 1e-3 && ext.eps_used == eps;
  double max_excess = -kInf;
  for (std::size_t k = 1; k <= 200; ++k)
    max_excess = std::max(max_excess, ext.h_on_orbit(k) + ext.drift.tau_hat * k - eps * k);
  pass = pass && max_excess <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "tau=%.6f vs log 3, descent excess %.2e over k <= 200 at eps=2^-10",
                ext.drift.tau_hat, max_excess);
  line("AC2", pass, t.seconds(), 5.0, buf);
}

void ac3_boundary_attraction() {
  Timer t;
  PoincareDisk disk;
  DiskZoo zoo;
  bool pass = true;
  double worst_euclid = 0.0, worst_match = 0.0;
  for (const auto& f : zoo.fixed_point_free()) {
    const Cx target = *f.oracle().boundary_point;
    Cx z = disk.base_point();
    for (int n = 0; n < 1000; ++n) z = f(z);
    worst_euclid = std::max(worst_euclid, std::abs(z - target));

    OrbitPolicy policy;
    policy.allow_truncation = true;
    auto ext = extract_functional(disk, f, disk.base_point(), {}, 1000, policy);
    auto h_cat = disk_busemann(target);
    for (const auto& p : sample_points(disk, 20, 301))
      worst_match = std::max(worst_match, std::abs(ext.h(p) - h_cat(p)));
  }
  pass = worst_euclid < 1e-6 && worst_match < 1e-3;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "5 maps: orbit-to-boundary %.2e (tol 1e-6), functional match %.2e (tol 1e-3)",
                worst_euclid, worst_match);
  line("AC3", pass, t.seconds(), 5.0, buf);
}

void ac4_mean_ergodic() {
  Timer t;
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(3, 3);
  u(0, 0) = std::cos(1.0);
  u(0, 1) = -std::sin(1.0);
  u(1, 0) = std::sin(1.0);
  u(1, 1) = std::cos(1.0);
  auto rep = mean_ergodic(u, Vec{1.0, 0.0, 1.0}, 100000);
  const bool pass = rep.max_scaled_dev <= 3.0 && rep.tau_gap < 1e-4 &&
                    rep.functional_match_dev < 1e-3 &&
                    std::abs(rep.projection[2] - 1.0) < 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "n||avg-Pv|| <= %.3f (cap 3), tau gap %.2e, functional dev %.2e",
                rep.max_scaled_dev, rep.tau_gap, rep.functional_match_dev);
  line("AC4", pass, t.seconds(), 10.0, buf);
}

void ac5_hilbert_catalog() {
  Timer t;
  EuclideanPSpace h8(8, 2.0);
  const auto pts = sample_points(h8, 1000, 401, 5.0);
  const auto pairs = sample_pairs(pts.size(), 1000, 402);
  par::MidpointFn<EuclideanPSpace> mid = [](const Vec& a, const Vec& b, Vec& out) {
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  };
  Rng rng(403);
  double worst = -kInf;
  for (double r : {0.0, 0.5, 1.0, 2.0, kInf})
    for (int rep = 0; rep < 20; ++rep) {
      Vec v = rng.vector(8, -1.0, 1.0);
      const double n = norm2(v);
      if (n > 1.0) v = scaled(v, rng.uniform01() / n);
      auto h = hilbert_functional(h8, r, v);
      worst = std::max(
          worst,
          par::functional_law_scan(h8, h, pts, pairs, par::default_exec(), mid).worst());
    }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "100 functionals x 1000 samples: worst law violation %.2e (tol 1e-9)",
                worst);
  line("AC5", worst < 1e-9, t.seconds(), 10.0, buf);
}

void ac6_thurston_cross_check() {
  Timer t;
  Rng rng(8);
  double gap50 = 0.0, gap800 = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Cx x(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
    const Cx y(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
    const double closed = thurston_closed(x, y);
    gap50 = std::max(gap50, closed - thurston_enumerate(x, y, 50).value);
    gap800 = std::max(gap800, closed - thurston_enumerate(x, y, 800).value);
  }
  const double base = std::abs(thurston_closed(Cx(0, 1), Cx(0, 2)) - 0.5 * std::log(2.0));
  const double secs = t.seconds();
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "enumerate(50) gap %.2e vs tol 1e-6 [box resolution is ~1/N^2; see "
                "notes]; L(i,2i) dev %.1e",
                gap50, base);
  line("AC6", gap50 < 1e-6 && base < 1e-9, secs, 10.0, buf);
  char buf2[160];
  std::snprintf(buf2, sizeof(buf2),
                "supplementary: same pairs at N=800, gap %.2e (tol 1e-6)", gap800);
  line("AC6s", gap800 < 1e-6 && base < 1e-9, 0.0, 10.0, buf2);
}

void ac7_curve_growth() {
  Timer t;
  TorusTeich torus;
  CocycleDriver<TorusTeich> anosov;
  anosov.family = {torus_class_map(MapClass{{{2, 1}, {1, 1}}})};
  anosov.weights = {1.0};
  auto tr = compose_cocycle(torus, anosov, 60, torus.base_point());
  auto rep = curve_growth(tr, CurveClass{1, 0});
  const double lam = std::log((3.0 + std::sqrt(5.0)) / 2.0);

  CocycleDriver<TorusTeich> finite;
  finite.family = {torus_class_map(MapClass{{{0, -1}, {1, 0}}})};
  finite.weights = {1.0};
  auto trf = compose_cocycle(torus, finite, 64, torus.base_point());
  auto repf = curve_growth(trf, CurveClass{1, 0});

  const bool pass = std::abs(rep.rate_step - lam) < 1e-3 && std::abs(repf.rate_cesaro) < 1e-6;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "rate %.9f vs log((3+sqrt5)/2)=%.9f at k=60 (ratio estimator; Cesaro "
                "%.6f), finite-order rate %.1e",
                rep.rate_step, lam, rep.rate_cesaro, std::abs(repf.rate_cesaro));
  line("AC7", pass, t.seconds(), 1.0, buf);
}

void ac8_top_lyapunov() {
  Timer t;
  OperatorSpace sp(2);
  Mat d4 = Mat::Zero(2, 2), d12 = Mat::Zero(2, 2), d2 = Mat::Zero(2, 2),
      dswap = Mat::Zero(2, 2);
  d4 << 4, 0, 0, 1;
  d12 << 1, 0, 0, 2;
  d2 << 2, 0, 0, 0.5;
  dswap << 0.5, 0, 0, 2;

  CocycleDriver<OperatorSpace> split;
  split.family = {left_mult_map(sp, d4), left_mult_map(sp, d12)};
  split.weights = {0.5, 0.5};
  split.seed = 2024;
  auto rep_split = top_lyapunov(sp, split, 100000);

  CocycleDriver<OperatorSpace> sym;
  sym.family = {left_mult_map(sp, d2), left_mult_map(sp, dswap)};
  sym.weights = {0.5, 0.5};
  sym.seed = 77;
  auto rep_sym = top_lyapunov(sp, sym, 100000);

  const double dev_split = std::abs(rep_split.exponent - std::log(2.0));
  const double dev_sym = std::abs(rep_sym.exponent);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "split exponent dev %.4f from log 2, symmetric exponent %.4f (tol 0.02)",
                dev_split, dev_sym);
  line("AC8", dev_split < 0.02 && dev_sym < 0.02, t.seconds(), 30.0, buf);
}

void ac9_km_records() {
  Timer t;
  TorusTeich torus;
  CocycleDriver<TorusTeich> d;
  d.kind = DriverKind::iid;
  d.family = {torus_class_map(MapClass{{{1, 1}, {0, 1}}}, "L"),
              torus_class_map(MapClass{{{1, 0}, {1, 1}}}, "R")};
  d.weights = {0.5, 0.5};
  d.seed = 9;
  auto tr = compose_cocycle(torus, d, 10000, torus.base_point());
  auto dom = dominant_curve(tr, default_curve_basis(), 0.1);
  auto km = km_record_times(tr, 0.1);
  const bool pass = !km.records.empty() && dom.lower_bound_margin >= -1e-9;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%zu records (K=%u), dominant-curve lower-bound margin %.2e at record %zu",
                km.records.size(), km.k_eps, dom.lower_bound_margin, dom.top_record);
  line("AC9", pass, t.seconds(), 60.0, buf);
}

void ac10_invariant_suites() {
  Timer t;
  Json cfg{{"schema_version", 1},
           {"experiment", "invariants"},
           {"samples", 1000},
           {"seed", 7},
           {"output", {{"csv", false}, {"json", false}}}};
  auto rep = run_experiment(cfg);
  bool pass = rep.pass();
  std::size_t tracial_checks = 0;
  for (const auto& c : rep.checks)
    if (c.name.rfind("spectral.tracial.", 0) == 0) {
      ++tracial_checks;
      pass = pass && c.value < 1e-3;
    }
  std::size_t failed = 0;
  for (const auto& c : rep.checks)
    if (!c.pass) ++failed;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu zoo checks, %zu failed; %zu tracial diffs < 1e-3",
                rep.checks.size(), failed, tracial_checks);
  line("AC10", pass, t.seconds(), 60.0, buf);
}

}  // namespace

int main() {
  ac1_drift_exactness();
  ac2_spectral_certificate();
  ac3_boundary_attraction();
  ac4_mean_ergodic();
  ac5_hilbert_catalog();
  ac6_thurston_cross_check();
  ac7_curve_growth();
  ac8_top_lyapunov();
  ac9_km_records();
  ac10_invariant_suites();
  std::printf("%s: %d criterion(s) failed\n", failures ? "RED" : "GREEN", failures);
  return failures;
}
