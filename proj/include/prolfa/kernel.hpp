#pragma once

#include <vector>

#include "prolfa/dataset.hpp"

namespace prolfa {

// Pooled linear-kernel rows: row r is the mean descriptor of the r-th
// selected sample dotted with every descriptor in the dataset, i.e. the hard
// group-weight row applied to X'X. In labeled-only mode rows exist just for
// mask-selected samples while columns still span all N descriptors.
struct BundledKernel {
  Matrix rows;                    // (#selected samples) x N
  std::vector<Index> sample_ids;  // dataset sample index per row
};

BundledKernel build_bundled_kernel(const DescriptorDataset& ds, const GroupWeights& weights,
                                   bool labeled_only = false);

}  // namespace prolfa
