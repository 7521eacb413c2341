#pragma once

#include <Eigen/Dense>

#include "prolfa/common.hpp"

namespace prolfa {

// Central-difference gradient of a scalar function of a matrix, entry by
// entry: (f(X + h*Eij) - f(X - h*Eij)) / (2h).
template <class F>
Eigen::MatrixXd finite_difference_gradient(F&& f, const Eigen::MatrixXd& x0, double h) {
  if (!(h > 0)) throw Error("finite_difference_gradient: step must be positive");
  Eigen::MatrixXd grad(x0.rows(), x0.cols());
  Eigen::MatrixXd x = x0;
  for (Eigen::Index j = 0; j < x0.cols(); ++j) {
    for (Eigen::Index i = 0; i < x0.rows(); ++i) {
      x(i, j) = x0(i, j) + h;
      const double fp = f(x);
      x(i, j) = x0(i, j) - h;
      const double fm = f(x);
      x(i, j) = x0(i, j);
      grad(i, j) = (fp - fm) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace prolfa
