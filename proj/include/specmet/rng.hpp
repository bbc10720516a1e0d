#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace specmet {

// SplitMix64 stream. Self-contained so that seeded runs are reproducible
// bit-for-bit regardless of the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  // Standard normal via Box-Muller (pairless form; one extra draw per call).
  double normal();

  std::vector<double> vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::uint64_t state_;
};

inline double Rng::normal() {
  // u in (0,1] to keep the log finite.
  double u = 1.0 - uniform01();
  double v = uniform01();
  constexpr double two_pi = 6.283185307179586476925286766559;
  double r = std::sqrt(-2.0 * std::log(u));
  return r * std::cos(two_pi * v);
}

}  // namespace specmet
