#include "specmet/opspace.hpp"

namespace specmet {

double operator_norm(const Mat& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  if (m.rows() == 2) {
    // Singular values of a 2x2 from the Gram invariants.
    const double t = m(0, 0) * m(0, 0) + m(0, 1) * m(0, 1) + m(1, 0) * m(1, 0) +
                     m(1, 1) * m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    return std::sqrt(0.5 * (t + disc));
  }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace specmet
