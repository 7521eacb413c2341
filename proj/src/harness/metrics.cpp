#include "prolfa/harness/metrics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace prolfa {
namespace {

// Shared distance machinery; Mahalanobis factorizes the reference covariance
// once per call site.
class DistanceFn {
 public:
  DistanceFn(DistanceMetric metric, double p, const Matrix& reference_rows)
      : metric_(metric), p_(p) {
    if (metric_ == DistanceMetric::Minkowski && !(p_ > 0))
      throw Error("minkowski distance requires p > 0");
    if (metric_ == DistanceMetric::Mahalanobis) {
      const Index n = reference_rows.rows();
      const Index d = reference_rows.cols();
      if (n == 0 || d == 0) throw Error("mahalanobis distance requires a nonempty reference set");
      const RowVector mean = reference_rows.colwise().mean();
      const Matrix centered = reference_rows.rowwise() - mean;
      Matrix cov = centered.transpose() * centered / std::max<double>(1.0, double(n - 1));
      const double ridge = 1e-6 * cov.trace() / double(d);
      cov += std::max(ridge, 1e-12) * Matrix::Identity(d, d);
      solver_.compute(cov);
      if (solver_.info() != Eigen::Success)
        throw Error("mahalanobis covariance factorization failed");
    }
  }

  double operator()(const RowVector& a, const RowVector& b) const {
    switch (metric_) {
      case DistanceMetric::Euclidean:
        return (a - b).norm();
      case DistanceMetric::Cosine: {
        const double na = a.norm();
        const double nb = b.norm();
        if (na == 0.0 || nb == 0.0) return 1.0;
        return 1.0 - a.dot(b) / (na * nb);
      }
      case DistanceMetric::Mahalanobis: {
        const Vector diff = (a - b).transpose();
        return std::sqrt(std::max(0.0, diff.dot(solver_.solve(diff))));
      }
      case DistanceMetric::Minkowski:
        return std::pow((a - b).cwiseAbs().array().pow(p_).sum(), 1.0 / p_);
    }
    throw Error("unknown distance metric");
  }

 private:
  DistanceMetric metric_;
  double p_;
  Eigen::LDLT<Matrix> solver_;
};

// Ranks [0, n) by ascending key with index tie-break.
std::vector<Index> ranked_indices(const std::vector<double>& keys) {
  std::vector<Index> order(keys.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&keys](Index a, Index b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace

DistanceMetric metric_from_string(const std::string& name) {
  if (name == "euclidean") return DistanceMetric::Euclidean;
  if (name == "cosine") return DistanceMetric::Cosine;
  if (name == "mahalanobis") return DistanceMetric::Mahalanobis;
  if (name == "minkowski") return DistanceMetric::Minkowski;
  throw Error("unknown distance metric '" + name +
              "' (expected euclidean, cosine, mahalanobis or minkowski)");
}

std::string metric_to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::Euclidean: return "euclidean";
    case DistanceMetric::Cosine: return "cosine";
    case DistanceMetric::Mahalanobis: return "mahalanobis";
    case DistanceMetric::Minkowski: return "minkowski";
  }
  return "unknown";
}

std::vector<int> knn_classify(const Matrix& train_rows, const std::vector<int>& train_labels,
                              const Matrix& test_rows, int k, DistanceMetric metric,
                              double minkowski_p) {
  const Index n_train = train_rows.rows();
  if (n_train == 0) throw Error("knn_classify: empty training set");
  if (static_cast<Index>(train_labels.size()) != n_train)
    throw Error("knn_classify: label count does not match training rows");
  if (k < 1) throw Error("knn_classify: k must be at least 1");
  if (k > n_train)
    throw Error("knn_classify: k = " + std::to_string(k) + " exceeds training size " +
                std::to_string(n_train));
  if (test_rows.cols() != train_rows.cols())
    throw Error("knn_classify: representation widths differ");

  const DistanceFn dist(metric, minkowski_p, train_rows);
  std::vector<int> predictions(static_cast<std::size_t>(test_rows.rows()));
  std::vector<double> d(static_cast<std::size_t>(n_train));
  for (Index q = 0; q < test_rows.rows(); ++q) {
    const RowVector probe = test_rows.row(q);
    for (Index i = 0; i < n_train; ++i) d[static_cast<std::size_t>(i)] = dist(probe, train_rows.row(i));
    const std::vector<Index> order = ranked_indices(d);

    // vote count and summed distance per class among the k nearest
    std::map<int, std::pair<int, double>> votes;
    for (int r = 0; r < k; ++r) {
      const Index idx = order[static_cast<std::size_t>(r)];
      auto& entry = votes[train_labels[static_cast<std::size_t>(idx)]];
      entry.first += 1;
      entry.second += d[static_cast<std::size_t>(idx)];
    }
    int best_class = votes.begin()->first;
    auto best = votes.begin()->second;
    for (const auto& [cls, tally] : votes) {
      if (tally.first > best.first ||
          (tally.first == best.first && (tally.second < best.second ||
                                         (tally.second == best.second && cls < best_class)))) {
        best_class = cls;
        best = tally;
      }
    }
    predictions[static_cast<std::size_t>(q)] = best_class;
  }
  return predictions;
}

double leave_one_out_accuracy(const Matrix& rows, const std::vector<int>& labels, int k,
                              DistanceMetric metric, double minkowski_p) {
  const Index n = rows.rows();
  if (n < 2) throw Error("leave_one_out_accuracy: need at least 2 rows");
  int hits = 0;
  for (Index i = 0; i < n; ++i) {
    Matrix rest(n - 1, rows.cols());
    std::vector<int> rest_labels;
    rest_labels.reserve(static_cast<std::size_t>(n) - 1);
    Index r = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      rest.row(r++) = rows.row(j);
      rest_labels.push_back(labels[static_cast<std::size_t>(j)]);
    }
    const auto pred = knn_classify(rest, rest_labels, rows.row(i), k, metric, minkowski_p);
    if (pred[0] == labels[static_cast<std::size_t>(i)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double mean_average_precision(const Matrix& query_rows, const Matrix& db_rows,
                              const std::vector<std::vector<char>>& relevance,
                              DistanceMetric metric, double minkowski_p, int* excluded) {
  if (db_rows.rows() == 0) throw Error("mean_average_precision: empty database");
  if (static_cast<Index>(relevance.size()) != query_rows.rows())
    throw Error("mean_average_precision: one relevance list per query required");
  for (const auto& rel : relevance)
    if (static_cast<Index>(rel.size()) != db_rows.rows())
      throw Error("mean_average_precision: relevance list length does not match the database");

  const DistanceFn dist(metric, minkowski_p, db_rows);
  double ap_sum = 0.0;
  int counted = 0;
  int skipped = 0;
  std::vector<double> d(static_cast<std::size_t>(db_rows.rows()));
  for (Index q = 0; q < query_rows.rows(); ++q) {
    const auto& rel = relevance[static_cast<std::size_t>(q)];
    const long total_relevant = std::count_if(rel.begin(), rel.end(), [](char v) { return v != 0; });
    if (total_relevant == 0) {
      ++skipped;
      continue;
    }
    const RowVector probe = query_rows.row(q);
    for (Index i = 0; i < db_rows.rows(); ++i) d[static_cast<std::size_t>(i)] = dist(probe, db_rows.row(i));
    const std::vector<Index> order = ranked_indices(d);
    int seen_relevant = 0;
    double ap = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (rel[static_cast<std::size_t>(order[r])]) {
        ++seen_relevant;
        ap += static_cast<double>(seen_relevant) / static_cast<double>(r + 1);
      }
    }
    ap_sum += ap / static_cast<double>(total_relevant);
    ++counted;
  }
  if (excluded) *excluded = skipped;
  if (counted == 0) throw Error("mean_average_precision: every query had zero relevant items");
  return ap_sum / static_cast<double>(counted);
}

bool separable_two_class_2d(const Matrix& class_a_rows, const Matrix& class_b_rows) {
  if (class_a_rows.cols() != 2 || class_b_rows.cols() != 2)
    throw Error("separable_two_class_2d: expects 2-D points");
  if (class_a_rows.rows() == 0 || class_b_rows.rows() == 0)
    throw Error("separable_two_class_2d: both classes need points");

  Matrix all(class_a_rows.rows() + class_b_rows.rows(), 2);
  all << class_a_rows, class_b_rows;
  double scale = 0.0;
  for (Index i = 0; i < all.rows(); ++i) scale = std::max(scale, all.row(i).norm());
  const double gap_tol = 1e-9 * std::max(1.0, scale);

  std::vector<Eigen::Vector2d> candidates;
  // perpendiculars of every pair difference cover all hull edge normals;
  // cross-class differences cover vertex-vertex closest pairs
  for (Index i = 0; i < all.rows(); ++i) {
    for (Index j = i + 1; j < all.rows(); ++j) {
      const Eigen::Vector2d diff = (all.row(i) - all.row(j)).transpose();
      if (diff.norm() < 1e-14) continue;
      candidates.emplace_back(-diff.y(), diff.x());
      candidates.push_back(diff);
    }
  }
  for (int a = 0; a < 360; ++a) {
    const double t = M_PI * a / 360.0;
    candidates.emplace_back(std::cos(t), std::sin(t));
  }

  for (const auto& raw : candidates) {
    const Eigen::Vector2d u = raw.normalized();
    double max_a = -1e300, min_a = 1e300, max_b = -1e300, min_b = 1e300;
    for (Index i = 0; i < class_a_rows.rows(); ++i) {
      const double v = class_a_rows.row(i).dot(u);
      max_a = std::max(max_a, v);
      min_a = std::min(min_a, v);
    }
    for (Index i = 0; i < class_b_rows.rows(); ++i) {
      const double v = class_b_rows.row(i).dot(u);
      max_b = std::max(max_b, v);
      min_b = std::min(min_b, v);
    }
    if (min_b - max_a > gap_tol || min_a - max_b > gap_tol) return true;
  }
  return false;
}

}  // namespace prolfa
