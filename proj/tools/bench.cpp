// Benchmark: serial reference vs OpenMP kernels.  Prints one line per kernel
// with both timings and the speedup; results are asserted equal first.

#include "specmet/ergodic.hpp"
#include "specmet/zoo.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace specmet;

namespace {

template <class F>
double time_ms(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx   %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms,
              equal ? "results equal" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifndef SPECMET_HAVE_OPENMP
  std::printf("built without OpenMP; parallel variants fall back to serial\n");
#endif

  {
    const Cx x(0.31, 1.41), y(-0.62, 0.83);
    const auto qx = q_form(x), qy = q_form(y);
    const int n = 2500;
    par::ScanBest s, p;
    const double ts = time_ms([&] { s = par::thurston_scan_serial(qx, qy, n); });
    const double tp = time_ms([&] { p = par::thurston_scan_parallel(qx, qy, n); });
    report("thurston_scan n=2500", ts, tp, s.value == p.value && s.p == p.p && s.q == p.q);
  }

  {
    PoincareDisk disk;
    const auto pts = sample_points(disk, 1024, 3);
    const auto triples = sample_triples(pts.size(), 400000, 4);
    double s = 0, p = 0;
    const double ts = time_ms([&] { s = par::triangle_scan_serial(disk, pts, triples); });
    const double tp = time_ms([&] { p = par::triangle_scan_parallel(disk, pts, triples); });
    report("triangle_scan disk 4e5", ts, tp, s == p);
  }

  {
    EuclideanPSpace h8(8, 2.0);
    const auto pts = sample_points(h8, 2048, 5, 5.0);
    const auto pairs = sample_pairs(pts.size(), 400000, 6);
    par::MidpointFn<EuclideanPSpace> mid = [](const Vec& a, const Vec& b, Vec& out) {
      out.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    };
    auto h = hilbert_functional(h8, 1.0, scaled(basis_vec(8, 0), 0.9));
    par::FunctionalLaws s, p;
    const double ts =
        time_ms([&] { s = par::functional_law_scan_serial(h8, h, pts, pairs, mid); });
    const double tp =
        time_ms([&] { p = par::functional_law_scan_parallel(h8, h, pts, pairs, mid); });
    report("functional_law_scan 4e5", ts, tp,
           s.lipschitz == p.lipschitz && s.convexity == p.convexity);
  }

  {
    PoincareDisk disk;
    const auto window = disk_window(0.995, 200000, 7);
    auto f = mobius_map(MobiusTransform::parabolic_fixing(Cx(1, 0)));
    auto apply = [&f](const Cx& z) { return f(z); };
    par::DisplacementBest s, p;
    const double ts =
        time_ms([&] { s = par::displacement_scan_serial(disk, apply, window.samples); });
    const double tp =
        time_ms([&] { p = par::displacement_scan_parallel(disk, apply, window.samples); });
    report("displacement_scan 2e5", ts, tp, s.value == p.value && s.index == p.index);
  }

  {
    EuclideanPSpace line(1, 2.0);
    CocycleDriver<EuclideanPSpace> d;
    d.kind = DriverKind::iid;
    d.family = {translation_map(line, {1.0}), translation_map(line, {3.0})};
    d.weights = {0.5, 0.5};
    d.seed = 8;
    auto tr = compose_cocycle(line, d, 3000, line.base_point());
    auto engine = tr.engine;
    auto profile = [engine](std::size_t n) { return engine->suffix_profile(n); };
    const double rate = tr.tau_hat() - 0.2;
    std::vector<std::uint32_t> s, p;
    const double ts =
        time_ms([&] { s = par::km_lag_scan_serial(tr.horizon(), profile, tr.a, rate); });
    const double tp =
        time_ms([&] { p = par::km_lag_scan_parallel(tr.horizon(), profile, tr.a, rate); });
    report("km_lag_scan n=3000", ts, tp, s == p);
  }

  return 0;
}
