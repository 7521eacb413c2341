#pragma once

#include <Eigen/Dense>

#include <string>

#include "prolfa/common.hpp"

namespace prolfa {

// Solve A*W + W*B = Q for symmetric positive-definite A and symmetric
// positive-semidefinite B. Both operands are diagonalized and the system is
// solved entrywise in the joint eigenbasis; the pencil is uniquely solvable
// because every eigenvalue pair sum stays positive.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> solve_sylvester(
    const Eigen::MatrixBase<Derived>& a_in, const Eigen::MatrixBase<Derived>& b_in,
    const Eigen::MatrixBase<Derived>& q_in) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat a = a_in;
  const Mat b = b_in;
  const Mat q = q_in;
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw Error("solve_sylvester: operands must be square");
  if (q.rows() != a.rows() || q.cols() != b.rows())
    throw Error("solve_sylvester: right-hand side shape mismatch");
  if (!a.allFinite() || !b.allFinite() || !q.allFinite())
    throw Error("solve_sylvester: non-finite input");

  const Scalar asym_a = (a - a.transpose()).cwiseAbs().maxCoeff();
  const Scalar asym_b = b.size() > 0 ? (b - b.transpose()).cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar scale_a = std::max<Scalar>(Scalar(1), a.cwiseAbs().maxCoeff());
  const Scalar scale_b = std::max<Scalar>(Scalar(1), b.size() > 0 ? b.cwiseAbs().maxCoeff() : Scalar(0));
  if (asym_a > Scalar(1e-8) * scale_a || asym_b > Scalar(1e-8) * scale_b)
    throw Error("solve_sylvester: operand not symmetric within 1e-8");

  Eigen::SelfAdjointEigenSolver<Mat> es_a(Scalar(0.5) * (a + a.transpose()));
  Eigen::SelfAdjointEigenSolver<Mat> es_b(Scalar(0.5) * (b + b.transpose()));
  const auto& alpha = es_a.eigenvalues();
  const auto& beta = es_b.eigenvalues();

  const Scalar tiny = Scalar(1e-12) * std::max<Scalar>(
      Scalar(1), alpha.cwiseAbs().maxCoeff() + (beta.size() > 0 ? beta.cwiseAbs().maxCoeff() : Scalar(0)));

  Mat rhs = es_a.eigenvectors().transpose() * q * es_b.eigenvectors();
  for (Eigen::Index i = 0; i < rhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
      const Scalar denom = alpha[i] + beta[j];
      if (denom <= tiny)
        throw Error("solve_sylvester: eigenvalue pair sum " + std::to_string(static_cast<double>(denom)) +
                    " is not positive; system not uniquely solvable");
      rhs(i, j) /= denom;
    }
  }
  return es_a.eigenvectors() * rhs * es_b.eigenvectors().transpose();
}

}  // namespace prolfa
