#pragma once

#include <string>
#include <vector>

#include "prolfa/dataset.hpp"

namespace prolfa {

enum class DistanceMetric { Euclidean, Cosine, Mahalanobis, Minkowski };

DistanceMetric metric_from_string(const std::string& name);
std::string metric_to_string(DistanceMetric metric);

// k-nearest-neighbor vote over representation rows. Ties in the vote are
// broken by the smaller summed distance, then the lower class index.
// Mahalanobis uses the reference-set covariance with ridge 1e-6*trace/dim.
std::vector<int> knn_classify(const Matrix& train_rows, const std::vector<int>& train_labels,
                              const Matrix& test_rows, int k,
                              DistanceMetric metric = DistanceMetric::Euclidean,
                              double minkowski_p = 3.0);

// Leave-one-out accuracy of the k-NN rule on one labeled set.
double leave_one_out_accuracy(const Matrix& rows, const std::vector<int>& labels, int k,
                              DistanceMetric metric = DistanceMetric::Euclidean,
                              double minkowski_p = 3.0);

// Mean average precision: per query rank the database by ascending distance
// (ties by index) and average precision at each relevant rank. Queries with
// no relevant item are excluded; their count lands in *excluded.
double mean_average_precision(const Matrix& query_rows, const Matrix& db_rows,
                              const std::vector<std::vector<char>>& relevance,
                              DistanceMetric metric = DistanceMetric::Euclidean,
                              double minkowski_p = 3.0, int* excluded = nullptr);

// Exact hard-margin separability test for two planar point sets (rows).
// Separating-axis search over all pair perpendiculars, cross differences and
// a fine direction grid.
bool separable_two_class_2d(const Matrix& class_a_rows, const Matrix& class_b_rows);

}  // namespace prolfa
