#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prolfa/dataset.hpp"

namespace prolfa {

// Class-pure Gaussian clouds: every sample owns points_per_sample descriptors
// drawn around its class mean, class means separated by class_separation.
struct SyntheticSpec {
  int n_points = 200;
  int n_samples = 10;
  int points_per_sample = 20;
  int n_classes = 2;
  int dim = 2;
  double class_separation = 6.0;
  double noise_sigma = 1.0;
  std::uint32_t seed = 0;
};

std::vector<std::string> validate_synthetic_spec(const SyntheticSpec& spec);

// Deterministic given the seed; responses are one-hot class indicators.
DescriptorDataset generate_synthetic(const SyntheticSpec& spec);

// Class means used by the generator (d x n_classes), exposed for checks.
Matrix synthetic_class_means(const SyntheticSpec& spec);

}  // namespace prolfa
