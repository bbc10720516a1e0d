/*
 * opspace.hpp — the operator hemi-metric on invertible matrices:
 *
 *   d(A, B) = log sup_{v != 0} ||B^t v|| / ||A^t v|| = log || B^t (A^t)^{-1} ||
 *
 * so d(I, A) = log ||A||.  Left multiplication A -> C A is an isometry, which
 * is what makes the random-product drift equal the top Lyapunov exponent.
 * Operator norms go through dense singular values (dimensions stay small).
 */

#pragma once

#include "specmet/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace specmet {

using Mat = Eigen::MatrixXd;

// Largest singular value.  2x2 matrices use the closed form, larger ones a
// Jacobi SVD.
double operator_norm(const Mat& m);

inline double operator_hemi_dist(const Mat& a, const Mat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw parameter_error("operator_hemi_dist: square matrices of equal size required");
  Eigen::FullPivLU<Mat> lu(a.transpose());
  if (!lu.isInvertible()) throw domain_error("operator_hemi_dist: singular matrix");
  return std::log(operator_norm(b.transpose() * lu.inverse()));
}

class OperatorSpace {
 public:
  using point_type = Mat;

  explicit OperatorSpace(Eigen::Index dim) : dim_(dim) {
    if (dim <= 0 || dim > 64) throw parameter_error("operator space: dim in [1, 64]");
  }

  double dist(const Mat& a, const Mat& b) const { return operator_hemi_dist(a, b); }

  Mat base_point() const { return Mat::Identity(dim_, dim_); }

  bool point_eq(const Mat& a, const Mat& b) const {
    return (a - b).cwiseAbs().maxCoeff() <= kPointEqTol;
  }

  bool contains(const Mat& a) const {
    if (a.rows() != dim_ || a.cols() != dim_ || !a.allFinite()) return false;
    Eigen::FullPivLU<Mat> lu(a);
    return lu.isInvertible();
  }

  Eigen::Index dim() const { return dim_; }

  std::string name() const { return "operator(dim=" + std::to_string(dim_) + ")"; }

 private:
  Eigen::Index dim_;
};

}  // namespace specmet
