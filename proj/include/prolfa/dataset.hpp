#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "prolfa/common.hpp"

namespace prolfa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

// A bag of local descriptors partitioned into samples. Column j of
// `descriptors` is one d-dimensional descriptor; sample i owns the
// consecutive column range [sample_offset(i), sample_offset(i) + partition[i]).
struct DescriptorDataset {
  Matrix descriptors;                    // d x N
  std::vector<std::uint32_t> partition;  // m entries, must sum to N
  Matrix responses;                      // m x c, 0x0 when absent
  std::vector<std::uint8_t> label_mask;  // m entries or empty
  std::string metadata;                  // trailing free-form block, round-tripped by the binary format

  Index dim() const { return descriptors.rows(); }
  Index descriptor_count() const { return descriptors.cols(); }
  Index sample_count() const { return static_cast<Index>(partition.size()); }
  Index response_dim() const { return responses.cols(); }
  bool has_responses() const { return responses.size() > 0; }
  bool has_label_mask() const { return !label_mask.empty(); }

  Index sample_size(Index i) const { return static_cast<Index>(partition[static_cast<std::size_t>(i)]); }
  Index sample_offset(Index i) const;
  auto sample_block(Index i) const { return descriptors.middleCols(sample_offset(i), sample_size(i)); }

  std::vector<Index> labeled_indices() const;
  std::vector<Index> unlabeled_indices() const;
};

// One message per violated invariant; empty result means the dataset is valid.
std::vector<std::string> validate_dataset(const DescriptorDataset& ds);

// Throws Error listing every violation.
void require_valid(const DescriptorDataset& ds);

// Hard mean-pooling weights: row i carries 1/N_i on sample i's column range
// and 0 elsewhere. Stored compactly; dense() materializes the m x N matrix.
class GroupWeights {
 public:
  explicit GroupWeights(const std::vector<std::uint32_t>& partition);

  Index rows() const { return static_cast<Index>(offsets_.size()) - 1; }
  Index cols() const { return offsets_.back(); }
  Index offset(Index i) const { return offsets_[static_cast<std::size_t>(i)]; }
  Index size(Index i) const { return offsets_[static_cast<std::size_t>(i) + 1] - offsets_[static_cast<std::size_t>(i)]; }
  double weight(Index i) const { return 1.0 / static_cast<double>(size(i)); }
  Matrix dense() const;

 private:
  std::vector<Index> offsets_;  // m + 1 entries, offsets_[0] = 0
};

GroupWeights build_group_weights(const std::vector<std::uint32_t>& partition);

}  // namespace prolfa
