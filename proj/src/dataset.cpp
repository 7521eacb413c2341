#include "prolfa/dataset.hpp"

#include <numeric>
#include <sstream>

#include "prolfa/hyperparameters.hpp"

namespace prolfa {

Index DescriptorDataset::sample_offset(Index i) const {
  Index off = 0;
  for (Index s = 0; s < i; ++s) off += sample_size(s);
  return off;
}

std::vector<Index> DescriptorDataset::labeled_indices() const {
  std::vector<Index> out;
  for (Index i = 0; i < sample_count(); ++i)
    if (i < static_cast<Index>(label_mask.size()) && label_mask[static_cast<std::size_t>(i)])
      out.push_back(i);
  return out;
}

std::vector<Index> DescriptorDataset::unlabeled_indices() const {
  std::vector<Index> out;
  for (Index i = 0; i < sample_count(); ++i)
    if (i >= static_cast<Index>(label_mask.size()) || !label_mask[static_cast<std::size_t>(i)])
      out.push_back(i);
  return out;
}

std::vector<std::string> validate_dataset(const DescriptorDataset& ds) {
  std::vector<std::string> issues;
  const Index n = ds.descriptor_count();
  const Index m = ds.sample_count();

  if (m == 0) issues.push_back("partition is empty");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < ds.partition.size(); ++i) {
    if (ds.partition[i] == 0)
      issues.push_back("sample " + std::to_string(i) + " is empty (partition entry 0)");
    total += ds.partition[i];
  }
  if (total != static_cast<std::uint64_t>(n)) {
    issues.push_back("partition sums to " + std::to_string(total) + " != " + std::to_string(n) +
                     " descriptors");
  }
  if (!ds.descriptors.allFinite()) issues.push_back("descriptors contain a non-finite entry");
  if (ds.has_responses()) {
    if (ds.responses.rows() != m) {
      issues.push_back("response rows " + std::to_string(ds.responses.rows()) + " != m " +
                       std::to_string(m));
    }
    if (!ds.responses.allFinite()) issues.push_back("responses contain a non-finite entry");
  }
  if (ds.has_label_mask()) {
    if (static_cast<Index>(ds.label_mask.size()) != m) {
      issues.push_back("label mask length " + std::to_string(ds.label_mask.size()) + " != m " +
                       std::to_string(m));
    }
    bool any = false;
    for (auto v : ds.label_mask) any = any || (v != 0);
    if (!any) issues.push_back("label mask is present but marks no sample as labeled");
  }
  return issues;
}

void require_valid(const DescriptorDataset& ds) {
  const auto issues = validate_dataset(ds);
  if (issues.empty()) return;
  std::ostringstream oss;
  oss << "invalid dataset (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << "):";
  for (const auto& msg : issues) oss << "\n  - " << msg;
  throw Error(oss.str());
}

GroupWeights::GroupWeights(const std::vector<std::uint32_t>& partition) {
  if (partition.empty()) throw Error("group weights: empty partition");
  offsets_.reserve(partition.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i] == 0)
      throw Error("group weights: sample " + std::to_string(i) + " has zero descriptors");
    offsets_.push_back(offsets_.back() + static_cast<Index>(partition[i]));
  }
}

Matrix GroupWeights::dense() const {
  Matrix g = Matrix::Zero(rows(), cols());
  for (Index i = 0; i < rows(); ++i) g.row(i).segment(offset(i), size(i)).setConstant(weight(i));
  return g;
}

GroupWeights build_group_weights(const std::vector<std::uint32_t>& partition) {
  return GroupWeights(partition);
}

std::vector<std::string> validate_hyperparameters(const Hyperparameters& h,
                                                  long long n_descriptors) {
  std::vector<std::string> issues;
  if (h.lambda1 < 0) issues.push_back("lambda1 must be nonnegative");
  if (h.lambda2 < 0) issues.push_back("lambda2 must be nonnegative");
  if (!(h.mu > 0)) issues.push_back("mu must be positive");
  if (h.prototypes == 0) issues.push_back("prototypes must be at least 1");
  if (n_descriptors >= 0 && static_cast<long long>(h.prototypes) > n_descriptors) {
    issues.push_back("prototypes " + std::to_string(h.prototypes) + " exceeds descriptor count " +
                     std::to_string(n_descriptors));
  }
  if (!(h.eps_reweight > 0)) issues.push_back("eps_reweight must be positive");
  if (!(h.tol_inner_row > 0)) issues.push_back("tol_inner_row must be positive");
  if (!(h.tol_admm > 0)) issues.push_back("tol_admm must be positive");
  if (!(h.tol_outer > 0)) issues.push_back("tol_outer must be positive");
  if (h.max_inner_row == 0) issues.push_back("max_inner_row must be at least 1");
  if (h.max_admm == 0) issues.push_back("max_admm must be at least 1");
  if (h.max_outer == 0) issues.push_back("max_outer must be at least 1");
  return issues;
}

}  // namespace prolfa
