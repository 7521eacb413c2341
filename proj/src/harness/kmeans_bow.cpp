#include "prolfa/harness/kmeans_bow.hpp"

#include <limits>
#include <random>

namespace prolfa {
namespace {

Index nearest_center(const Matrix& centers, const Vector& point) {
  Index best = 0;
  double best_d = (centers.col(0) - point).squaredNorm();
  for (Index c = 1; c < centers.cols(); ++c) {
    const double d = (centers.col(c) - point).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::vector<AggregatedRepresentation> kmeans_bow_baseline(const DescriptorDataset& ds,
                                                          Index codebook_size,
                                                          std::uint32_t seed) {
  const Index n = ds.descriptor_count();
  if (codebook_size < 1) throw Error("kmeans_bow_baseline: codebook size must be at least 1");
  if (codebook_size > n)
    throw Error("kmeans_bow_baseline: codebook size " + std::to_string(codebook_size) +
                " exceeds descriptor count " + std::to_string(n));

  const Matrix& points = ds.descriptors;
  std::mt19937_64 rng(seed);

  // k-means++ seeding: first center uniform, then proportional to squared
  // distance from the chosen set.
  Matrix centers(points.rows(), codebook_size);
  std::uniform_int_distribution<Index> first(0, n - 1);
  centers.col(0) = points.col(first(rng));
  Vector dist2 = (points.colwise() - centers.col(0)).colwise().squaredNorm().transpose();
  for (Index c = 1; c < codebook_size; ++c) {
    const double total = dist2.sum();
    Index pick = 0;
    if (total > 0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      for (Index i = 0; i < n; ++i) {
        target -= dist2[i];
        if (target <= 0) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = first(rng);
    }
    centers.col(c) = points.col(pick);
    for (Index i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i], (points.col(i) - centers.col(c)).squaredNorm());
  }

  std::vector<Index> assignment(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      const Index c = nearest_center(centers, points.col(i));
      if (c != assignment[static_cast<std::size_t>(i)]) {
        assignment[static_cast<std::size_t>(i)] = c;
        changed = true;
      }
    }

    Matrix sums = Matrix::Zero(points.rows(), codebook_size);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(codebook_size);
    for (Index i = 0; i < n; ++i) {
      sums.col(assignment[static_cast<std::size_t>(i)]) += points.col(i);
      counts[assignment[static_cast<std::size_t>(i)]] += 1;
    }
    for (Index c = 0; c < codebook_size; ++c) {
      if (counts[c] > 0) {
        centers.col(c) = sums.col(c) / counts[c];
      } else {
        // empty cluster: re-seed from the point farthest from its center,
        // lowest index on ties; duplicates at distance zero leave the
        // cluster dead rather than churning forever
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d =
              (points.col(i) - centers.col(assignment[static_cast<std::size_t>(i)])).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        if (far_d > 0.0) {
          centers.col(c) = points.col(far);
          assignment[static_cast<std::size_t>(far)] = c;
          counts[c] = 1;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  std::vector<AggregatedRepresentation> reps(static_cast<std::size_t>(ds.sample_count()));
  Index col = 0;
  for (Index i = 0; i < ds.sample_count(); ++i) {
    Vector hist = Vector::Zero(codebook_size);
    for (Index p = 0; p < ds.sample_size(i); ++p, ++col) hist[assignment[static_cast<std::size_t>(col)]] += 1.0;
    hist /= static_cast<double>(ds.sample_size(i));
    reps[static_cast<std::size_t>(i)].values = std::move(hist);
    reps[static_cast<std::size_t>(i)].sample_id = i;
  }
  return reps;
}

}  // namespace prolfa
