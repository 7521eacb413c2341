#include "prolfa/harness/synthetic.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace prolfa {

std::vector<std::string> validate_synthetic_spec(const SyntheticSpec& spec) {
  std::vector<std::string> issues;
  if (spec.n_points <= 0) issues.push_back("n_points must be positive");
  if (spec.n_samples <= 0) issues.push_back("n_samples must be positive");
  if (spec.points_per_sample <= 0) issues.push_back("points_per_sample must be positive");
  if (spec.n_samples * spec.points_per_sample != spec.n_points) {
    std::ostringstream oss;
    oss << "n_samples * points_per_sample = " << spec.n_samples * spec.points_per_sample
        << " != n_points " << spec.n_points;
    issues.push_back(oss.str());
  }
  if (spec.n_classes <= 0) issues.push_back("n_classes must be positive");
  if (spec.n_samples < spec.n_classes)
    issues.push_back("n_samples must be at least n_classes so every class owns a sample");
  if (spec.dim <= 0) issues.push_back("dim must be positive");
  if (spec.class_separation < 0) issues.push_back("class_separation must be nonnegative");
  if (spec.noise_sigma < 0) issues.push_back("noise_sigma must be nonnegative");
  return issues;
}

Matrix synthetic_class_means(const SyntheticSpec& spec) {
  const int k = spec.n_classes;
  const int d = spec.dim;
  const double s = spec.class_separation;
  Matrix means = Matrix::Zero(d, k);
  if (k == 1) return means;
  if (k <= d) {
    // Orthogonal placement at s/sqrt(2) makes every pairwise distance s.
    const double r = s / std::sqrt(2.0);
    for (int j = 0; j < k; ++j) means(j, j) = r;
    const Vector centroid = means.rowwise().mean();
    means.colwise() -= centroid;
  } else if (d >= 2) {
    // More classes than axes: circle in the first two axes, adjacent
    // distance s.
    const double r = s / (2.0 * std::sin(M_PI / k));
    for (int j = 0; j < k; ++j) {
      means(0, j) = r * std::cos(2.0 * M_PI * j / k);
      means(1, j) = r * std::sin(2.0 * M_PI * j / k);
    }
  } else {
    for (int j = 0; j < k; ++j) means(0, j) = s * j;
    const Vector centroid = means.rowwise().mean();
    means.colwise() -= centroid;
  }
  return means;
}

DescriptorDataset generate_synthetic(const SyntheticSpec& spec) {
  const auto issues = validate_synthetic_spec(spec);
  if (!issues.empty()) {
    std::ostringstream oss;
    oss << "invalid synthetic spec:";
    for (const auto& msg : issues) oss << " " << msg << ";";
    throw Error(oss.str());
  }

  const Matrix means = synthetic_class_means(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  DescriptorDataset ds;
  ds.descriptors.resize(spec.dim, spec.n_points);
  ds.partition.assign(static_cast<std::size_t>(spec.n_samples),
                      static_cast<std::uint32_t>(spec.points_per_sample));
  ds.responses = Matrix::Zero(spec.n_samples, spec.n_classes);

  Index col = 0;
  for (int i = 0; i < spec.n_samples; ++i) {
    const int cls = i % spec.n_classes;  // samples are class-pure
    ds.responses(i, cls) = 1.0;
    for (int p = 0; p < spec.points_per_sample; ++p, ++col) {
      for (int a = 0; a < spec.dim; ++a)
        ds.descriptors(a, col) = means(a, cls) + spec.noise_sigma * noise(rng);
    }
  }
  return ds;
}

}  // namespace prolfa
