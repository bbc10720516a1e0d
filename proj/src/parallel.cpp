#include "specmet/parallel.hpp"

#include <numeric>

namespace specmet::par {

namespace {

inline void consider(ScanBest& best, double value, std::int64_t p, std::int64_t q) {
  if (value > best.value ||
      (value == best.value && (p < best.p || (p == best.p && q < best.q))))
    best = {value, p, q};
}

inline double pair_log_ratio(const QForm& qx, const QForm& qy, std::int64_t p,
                             std::int64_t q) {
  const double pd = static_cast<double>(p), qd = static_cast<double>(q);
  return torus_log_length(qy, pd, qd) - torus_log_length(qx, pd, qd);
}

inline void scan_row(ScanBest& best, const QForm& qx, const QForm& qy, int n,
                     std::int64_t q) {
  if (q == 0) {
    consider(best, pair_log_ratio(qx, qy, 1, 0), 1, 0);
    return;
  }
  for (std::int64_t p = -n; p <= n; ++p) {
    if (std::gcd(std::llabs(p), q) != 1) continue;
    consider(best, pair_log_ratio(qx, qy, p, q), p, q);
  }
}

}  // namespace

ScanBest thurston_scan_serial(const QForm& qx, const QForm& qy, int n) {
  ScanBest best;
  for (std::int64_t q = 0; q <= n; ++q) scan_row(best, qx, qy, n, q);
  return best;
}

ScanBest thurston_scan_parallel(const QForm& qx, const QForm& qy, int n) {
#ifdef SPECMET_HAVE_OPENMP
  ScanBest best;
#pragma omp parallel
  {
    ScanBest local;
#pragma omp for nowait schedule(static)
    for (std::int64_t q = 0; q <= n; ++q) scan_row(local, qx, qy, n, q);
#pragma omp critical
    consider(best, local.value, local.p, local.q);
  }
  return best;
#else
  return thurston_scan_serial(qx, qy, n);
#endif
}

ScanBest thurston_scan(const QForm& qx, const QForm& qy, int n, Exec exec) {
  return exec == Exec::parallel ? thurston_scan_parallel(qx, qy, n)
                                : thurston_scan_serial(qx, qy, n);
}

namespace {

inline std::uint32_t lag_for_candidate(std::size_t n,
                                       const std::vector<double>& profile,
                                       const std::vector<double>& a, double rate) {
  // profile[k] = a(n - k, T^k w); largest violating k determines the lag.
  std::uint32_t lag = 1;
  for (std::size_t k = n; k >= 1; --k) {
    if (a[n] - profile[k] < rate * static_cast<double>(k)) {
      lag = static_cast<std::uint32_t>(k) + 1;
      break;
    }
  }
  return lag;
}

}  // namespace

std::vector<std::uint32_t> km_lag_scan_serial(
    std::size_t horizon, const std::function<std::vector<double>(std::size_t)>& suffix_profile,
    const std::vector<double>& a, double rate) {
  std::vector<std::uint32_t> lags(horizon + 1, 0);
  for (std::size_t n = 1; n <= horizon; ++n)
    lags[n] = lag_for_candidate(n, suffix_profile(n), a, rate);
  return lags;
}

std::vector<std::uint32_t> km_lag_scan_parallel(
    std::size_t horizon, const std::function<std::vector<double>(std::size_t)>& suffix_profile,
    const std::vector<double>& a, double rate) {
#ifdef SPECMET_HAVE_OPENMP
  std::vector<std::uint32_t> lags(horizon + 1, 0);
  const std::int64_t m = static_cast<std::int64_t>(horizon);
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t n = 1; n <= m; ++n) {
    try {
      const auto idx = static_cast<std::size_t>(n);
      lags[idx] = lag_for_candidate(idx, suffix_profile(idx), a, rate);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return lags;
#else
  return km_lag_scan_serial(horizon, suffix_profile, a, rate);
#endif
}

std::vector<std::uint32_t> km_lag_scan(
    std::size_t horizon, const std::function<std::vector<double>(std::size_t)>& suffix_profile,
    const std::vector<double>& a, double rate, Exec exec) {
  return exec == Exec::parallel ? km_lag_scan_parallel(horizon, suffix_profile, a, rate)
                                : km_lag_scan_serial(horizon, suffix_profile, a, rate);
}

}  // namespace specmet::par
