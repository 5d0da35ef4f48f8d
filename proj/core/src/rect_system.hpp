#pragma once

// Eigen-facing helpers shared by the solvers; not installed.

#include <Eigen/Dense>

#include "peglab/inscribe.hpp"

namespace peglab::detail {

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat45 = Eigen::Matrix<double, 4, 5>;

/// Residual and Jacobian in (theta, s, t, s2, t2) order.
void rectangle_system(const JordanCurve& curve, double theta, const Quad& params, Vec4& residual,
                      Mat45* jacobian);

/// Pseudo-inverse solve with relative singular value cutoff.
template <class Mat, class Vec>
Eigen::VectorXd pinv_solve(const Mat& a, const Vec& b, double cutoff = 1e-13) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::VectorXd ub = svd.matrixU().transpose() * Eigen::VectorXd(b);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(svd.matrixV().cols());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff * smax) y(i) = ub(i) / sv(i);
  }
  return svd.matrixV() * y;
}

}  // namespace peglab::detail
