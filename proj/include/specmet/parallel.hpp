/*
 * parallel.hpp — scan kernels with OpenMP and serial variants.
 *
 * Every kernel here is a data-parallel sweep (property sampling, curve
 * enumeration, record-lag scanning, displacement search) whose reduction is a
 * max/min under a total order, so the parallel variant returns bit-identical
 * results to the serial reference for any thread count.  The serial versions
 * are the reference implementations the tests compare against; the bench tool
 * times one against the other.
 */

#pragma once

#include "specmet/core.hpp"
#include "specmet/torus.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#ifdef SPECMET_HAVE_OPENMP
#include <omp.h>
#endif

namespace specmet::par {

enum class Exec { serial, parallel };

inline Exec default_exec() {
#ifdef SPECMET_HAVE_OPENMP
  return Exec::parallel;
#else
  return Exec::serial;
#endif
}

// ---------------------------------------------------------------------------
// Thurston curve enumeration: argmax of log l_y(a) / l_x(a) over canonical
// primitive pairs with |p|, |q| <= n.  Ties break toward the lexicographically
// smallest (p, q).

struct ScanBest {
  double value = -kInf;
  std::int64_t p = 0, q = 0;
};

ScanBest thurston_scan_serial(const QForm& qx, const QForm& qy, int n);
ScanBest thurston_scan_parallel(const QForm& qx, const QForm& qy, int n);
ScanBest thurston_scan(const QForm& qx, const QForm& qy, int n, Exec exec);

// ---------------------------------------------------------------------------
// Record-lag scan for subadditive cocycles.  For each candidate n in [1, N],
// K(n) = 1 + the largest k in [1, n] violating
//
//     a(n) - a(n - k, T^k w) >= rate * k,
//
// i.e. the smallest admissible lag threshold for n (1 when nothing violates,
// n + 1 when even k = n fails).  suffix_profile(n) must return the vector
// prof with prof[k] = a(n - k, T^k w) for k = 0..n.

std::vector<std::uint32_t> km_lag_scan_serial(
    std::size_t horizon, const std::function<std::vector<double>(std::size_t)>& suffix_profile,
    const std::vector<double>& a, double rate);
std::vector<std::uint32_t> km_lag_scan_parallel(
    std::size_t horizon, const std::function<std::vector<double>(std::size_t)>& suffix_profile,
    const std::vector<double>& a, double rate);
std::vector<std::uint32_t> km_lag_scan(
    std::size_t horizon, const std::function<std::vector<double>(std::size_t)>& suffix_profile,
    const std::vector<double>& a, double rate, Exec exec);

// ---------------------------------------------------------------------------
// Generic metric-law sweeps (templates over the space).

template <class S>
double triangle_scan_serial(const S& s, const std::vector<typename S::point_type>& pts,
                            const std::vector<std::array<std::uint32_t, 3>>& triples) {
  double worst = -kInf;
  for (const auto& t : triples) {
    const auto& x = pts[t[0]];
    const auto& y = pts[t[1]];
    const auto& z = pts[t[2]];
    worst = std::max(worst, s.dist(x, y) - s.dist(x, z) - s.dist(z, y));
  }
  return worst;
}

template <class S>
double triangle_scan_parallel(const S& s, const std::vector<typename S::point_type>& pts,
                              const std::vector<std::array<std::uint32_t, 3>>& triples) {
#ifdef SPECMET_HAVE_OPENMP
  double worst = -kInf;
  const std::int64_t m = static_cast<std::int64_t>(triples.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t i = 0; i < m; ++i) {
    const auto& t = triples[static_cast<std::size_t>(i)];
    const double v = s.dist(pts[t[0]], pts[t[1]]) - s.dist(pts[t[0]], pts[t[2]]) -
                     s.dist(pts[t[2]], pts[t[1]]);
    worst = std::max(worst, v);
  }
  return worst;
#else
  return triangle_scan_serial(s, pts, triples);
#endif
}

template <class S>
double triangle_scan(const S& s, const std::vector<typename S::point_type>& pts,
                     const std::vector<std::array<std::uint32_t, 3>>& triples, Exec exec) {
  return exec == Exec::parallel ? triangle_scan_parallel(s, pts, triples)
                                : triangle_scan_serial(s, pts, triples);
}

// Max of d(f x, f y) - d(x, y) over sampled pairs; <= 0 (mod tolerance) for a
// semicontraction.
template <class S, class F>
double contraction_scan_serial(const S& s, F&& f,
                               const std::vector<typename S::point_type>& pts,
                               const std::vector<std::array<std::uint32_t, 2>>& pairs) {
  double worst = -kInf;
  for (const auto& pr : pairs) {
    const auto& x = pts[pr[0]];
    const auto& y = pts[pr[1]];
    worst = std::max(worst, s.dist(f(x), f(y)) - s.dist(x, y));
  }
  return worst;
}

template <class S, class F>
double contraction_scan_parallel(const S& s, F&& f,
                                 const std::vector<typename S::point_type>& pts,
                                 const std::vector<std::array<std::uint32_t, 2>>& pairs) {
#ifdef SPECMET_HAVE_OPENMP
  double worst = -kInf;
  const std::int64_t m = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t i = 0; i < m; ++i) {
    const auto& pr = pairs[static_cast<std::size_t>(i)];
    const auto& x = pts[pr[0]];
    const auto& y = pts[pr[1]];
    worst = std::max(worst, s.dist(f(x), f(y)) - s.dist(x, y));
  }
  return worst;
#else
  return contraction_scan_serial(s, f, pts, pairs);
#endif
}

template <class S, class F>
double contraction_scan(const S& s, F&& f, const std::vector<typename S::point_type>& pts,
                        const std::vector<std::array<std::uint32_t, 2>>& pairs, Exec exec) {
  return exec == Exec::parallel ? contraction_scan_parallel(s, f, pts, pairs)
                                : contraction_scan_serial(s, f, pts, pairs);
}

// ---------------------------------------------------------------------------
// Metric-functional law sweep: normalization, two-sided bound, directed
// 1-Lipschitz, and (when a midpoint rule exists) convexity.  Each field is a
// max violation; all <= tolerance means pass.

struct FunctionalLaws {
  double normalization = 0.0;
  double upper_bound = -kInf;   // h(y) - d(y, x0)
  double lower_bound = -kInf;   // -d(x0, y) - h(y)
  double lipschitz = -kInf;     // h(y) - h(z) - d(y, z)
  double convexity = -kInf;     // h(mid) - (h(y) + h(z)) / 2

  double worst() const {
    return std::max({normalization, upper_bound, lower_bound, lipschitz, convexity});
  }
};

// Writes the midpoint into `out` so sweeps reuse one buffer per thread
// instead of allocating per pair.
template <class S>
using MidpointFn = std::function<void(const typename S::point_type&,
                                      const typename S::point_type&,
                                      typename S::point_type&)>;

template <class S>
FunctionalLaws functional_law_scan_serial(const S& s, const MetricFunctional<S>& h,
                                          const std::vector<typename S::point_type>& pts,
                                          const std::vector<std::array<std::uint32_t, 2>>& pairs,
                                          const MidpointFn<S>& midpoint = {}) {
  FunctionalLaws out;
  const auto x0 = s.base_point();
  out.normalization = std::abs(h(x0));
  for (const auto& y : pts) {
    const double hy = h(y);
    out.upper_bound = std::max(out.upper_bound, hy - s.dist(y, x0));
    out.lower_bound = std::max(out.lower_bound, -s.dist(x0, y) - hy);
  }
  typename S::point_type mid;
  for (const auto& pr : pairs) {
    const auto& y = pts[pr[0]];
    const auto& z = pts[pr[1]];
    out.lipschitz = std::max(out.lipschitz, h(y) - h(z) - s.dist(y, z));
    if (midpoint) {
      midpoint(y, z, mid);
      out.convexity = std::max(out.convexity, h(mid) - 0.5 * (h(y) + h(z)));
    }
  }
  return out;
}

template <class S>
FunctionalLaws functional_law_scan_parallel(const S& s, const MetricFunctional<S>& h,
                                            const std::vector<typename S::point_type>& pts,
                                            const std::vector<std::array<std::uint32_t, 2>>& pairs,
                                            const MidpointFn<S>& midpoint = {}) {
#ifdef SPECMET_HAVE_OPENMP
  FunctionalLaws out;
  const auto x0 = s.base_point();
  out.normalization = std::abs(h(x0));
  double ub = -kInf, lb = -kInf, lip = -kInf, cvx = -kInf;
  const std::int64_t np = static_cast<std::int64_t>(pts.size());
  const std::int64_t nq = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for reduction(max : ub, lb) schedule(static)
  for (std::int64_t i = 0; i < np; ++i) {
    const auto& y = pts[static_cast<std::size_t>(i)];
    const double hy = h(y);
    ub = std::max(ub, hy - s.dist(y, x0));
    lb = std::max(lb, -s.dist(x0, y) - hy);
  }
#pragma omp parallel
  {
    typename S::point_type mid;  // per-thread scratch
    // Over-allocate vector-like scratches so the write-hot buffers of
    // different threads cannot share a cache line.
    if constexpr (requires { mid.reserve(std::size_t{}); }) mid.reserve(64);
#pragma omp for reduction(max : lip, cvx) schedule(static)
    for (std::int64_t i = 0; i < nq; ++i) {
      const auto& pr = pairs[static_cast<std::size_t>(i)];
      const auto& y = pts[pr[0]];
      const auto& z = pts[pr[1]];
      lip = std::max(lip, h(y) - h(z) - s.dist(y, z));
      if (midpoint) {
        midpoint(y, z, mid);
        cvx = std::max(cvx, h(mid) - 0.5 * (h(y) + h(z)));
      }
    }
  }
  out.upper_bound = ub;
  out.lower_bound = lb;
  out.lipschitz = lip;
  out.convexity = cvx;
  return out;
#else
  return functional_law_scan_serial(s, h, pts, pairs, midpoint);
#endif
}

template <class S>
FunctionalLaws functional_law_scan(const S& s, const MetricFunctional<S>& h,
                                   const std::vector<typename S::point_type>& pts,
                                   const std::vector<std::array<std::uint32_t, 2>>& pairs,
                                   Exec exec, const MidpointFn<S>& midpoint = {}) {
  return exec == Exec::parallel ? functional_law_scan_parallel(s, h, pts, pairs, midpoint)
                                : functional_law_scan_serial(s, h, pts, pairs, midpoint);
}

// ---------------------------------------------------------------------------
// Displacement sweep: min of d(x, f x) over sampled points.  Ties break
// toward the smaller index.

struct DisplacementBest {
  double value = kInf;
  std::size_t index = 0;
};

template <class S, class F>
DisplacementBest displacement_scan_serial(const S& s, F&& f,
                                          const std::vector<typename S::point_type>& pts) {
  DisplacementBest best;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = s.dist(pts[i], f(pts[i]));
    if (v < best.value) best = {v, i};
  }
  return best;
}

template <class S, class F>
DisplacementBest displacement_scan_parallel(const S& s, F&& f,
                                            const std::vector<typename S::point_type>& pts) {
#ifdef SPECMET_HAVE_OPENMP
  DisplacementBest best;
  const std::int64_t m = static_cast<std::int64_t>(pts.size());
#pragma omp parallel
  {
    DisplacementBest local;
#pragma omp for nowait schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double v = s.dist(pts[idx], f(pts[idx]));
      if (v < local.value || (v == local.value && idx < local.index)) local = {v, idx};
    }
#pragma omp critical
    {
      if (local.value < best.value ||
          (local.value == best.value && local.index < best.index))
        best = local;
    }
  }
  return best;
#else
  return displacement_scan_serial(s, f, pts);
#endif
}

template <class S, class F>
DisplacementBest displacement_scan(const S& s, F&& f,
                                   const std::vector<typename S::point_type>& pts, Exec exec) {
  return exec == Exec::parallel ? displacement_scan_parallel(s, f, pts)
                                : displacement_scan_serial(s, f, pts);
}

}  // namespace specmet::par
