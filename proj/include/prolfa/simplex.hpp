#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <string>

#include "prolfa/common.hpp"
#include "prolfa/parallel.hpp"

namespace prolfa {

// Euclidean projection onto {w : w >= 0, 1'w = 1} by the sort-and-threshold
// rule: sort descending, find the largest pivot count whose shifted entries
// stay positive, subtract the threshold and clip.
template <class Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> project_to_simplex(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;
  Vec x = v;
  if (x.size() == 0) throw Error("project_to_simplex: empty input");
  if (!x.allFinite()) throw Error("project_to_simplex: non-finite input");
  Vec u = x;
  std::sort(u.data(), u.data() + u.size(), std::greater<Scalar>());
  Scalar running = 0;
  Scalar threshold = 0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    running += u[j];
    const Scalar t = (running - Scalar(1)) / static_cast<Scalar>(j + 1);
    if (u[j] - t > Scalar(0)) threshold = t;
  }
  return (x.array() - threshold).max(Scalar(0)).matrix();
}

// Independent per-column projection. Column results do not depend on the
// worker count.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
project_columns_to_simplex(const Eigen::MatrixBase<Derived>& m_in, int threads = 1) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = m_in;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (!m.col(j).allFinite())
      throw Error("project_columns_to_simplex: non-finite input in column " + std::to_string(j));
  }
  parallel_for(m.cols(), threads, [&m](std::ptrdiff_t j) {
    m.col(j) = project_to_simplex(m.col(j));
  });
  return m;
}

}  // namespace prolfa
