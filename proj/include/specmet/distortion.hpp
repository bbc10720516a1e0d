/*
 * distortion.hpp — distortion coefficient of a C^1 diffeomorphism onto its
 * image: K(g; I) = sup_{x,y in I} |log(g'(x) / g'(y))|.  Subadditive under
 * composition and K(g, I) = K(g^{-1}, g(I)).  Evaluated on a uniform grid
 * with one refinement step (N and 2N points), both values reported.
 */

#pragma once

#include "specmet/core.hpp"

#include <cmath>
#include <functional>

namespace specmet {

struct DistortionEstimate {
  double coarse = 0.0;   // grid with n points
  double refined = 0.0;  // grid with 2n points
};

inline double distortion_on_grid(const std::function<double(double)>& g_prime, double lo,
                                 double hi, int n) {
  if (n < 2) throw parameter_error("distortion: need at least 2 grid points");
  if (!(hi > lo)) throw parameter_error("distortion: empty interval");
  double lmin = kInf, lmax = -kInf;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double d = g_prime(x);
    if (!(d > 0.0)) throw domain_error("distortion: derivative must be positive on I");
    const double ld = std::log(d);
    lmin = std::min(lmin, ld);
    lmax = std::max(lmax, ld);
  }
  return lmax - lmin;
}

inline DistortionEstimate distortion_scan(const std::function<double(double)>& g_prime,
                                          double lo, double hi, int n) {
  return DistortionEstimate{distortion_on_grid(g_prime, lo, hi, n),
                            distortion_on_grid(g_prime, lo, hi, 2 * n)};
}

// The refined-grid value; non-decreasing in n.
inline double distortion_coeff(const std::function<double(double)>& g_prime, double lo,
                               double hi, int n) {
  return distortion_scan(g_prime, lo, hi, n).refined;
}

}  // namespace specmet
