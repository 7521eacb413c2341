#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "prolfa/common.hpp"

namespace prolfa {

// Upper bound on the largest eigenvalue of a symmetric PSD matrix: power
// iteration from the deterministic all-ones start, Rayleigh quotient
// converged to 1e-3 relative, inflated by the 1.01 safety factor. If the
// start vector happens to sit in the null space, restart from basis vectors.
template <class Derived>
double spectral_norm_upper_bound(const Eigen::MatrixBase<Derived>& m_in) {
  Eigen::MatrixXd m = m_in.template cast<double>();
  if (m.rows() != m.cols()) throw Error("spectral_norm_upper_bound: matrix must be square");
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw Error("spectral_norm_upper_bound: non-finite input");
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;

  const Eigen::Index n = m.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  double rayleigh = 0.0;
  Eigen::Index restart = 0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd w = m * v;
    const double wn = w.norm();
    if (wn <= 1e-14 * scale) {
      if (restart >= n) break;
      v = Eigen::VectorXd::Unit(n, restart++);
      rayleigh = 0.0;
      continue;
    }
    const double rq = v.dot(w);
    v = w / wn;
    if (it > 0 && std::abs(rq - rayleigh) <= 1e-3 * std::max(std::abs(rq), 1e-30)) {
      rayleigh = rq;
      break;
    }
    rayleigh = rq;
  }
  return 1.01 * std::max(rayleigh, 0.0);
}

}  // namespace prolfa
