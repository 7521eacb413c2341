#include "prolfa/kernel.hpp"

namespace prolfa {

BundledKernel build_bundled_kernel(const DescriptorDataset& ds, const GroupWeights& weights,
                                   bool labeled_only) {
  if (weights.cols() != ds.descriptor_count() || weights.rows() != ds.sample_count())
    throw Error("bundled kernel: group weights do not match the dataset");
  if (labeled_only && !ds.has_label_mask())
    throw Error("bundled kernel: labeled-only mode requires a label mask");

  std::vector<Index> ids;
  if (labeled_only) {
    ids = ds.labeled_indices();
    if (ids.empty()) throw Error("bundled kernel: label mask marks no sample");
  } else {
    ids.resize(static_cast<std::size_t>(ds.sample_count()));
    for (Index i = 0; i < ds.sample_count(); ++i) ids[static_cast<std::size_t>(i)] = i;
  }

  // Row r = mean descriptor of sample ids[r], dotted with every descriptor;
  // one d x rows matrix of means keeps the whole build at one GEMM.
  Matrix means(ds.dim(), static_cast<Index>(ids.size()));
  for (std::size_t r = 0; r < ids.size(); ++r)
    means.col(static_cast<Index>(r)) = ds.sample_block(ids[r]).rowwise().mean();

  BundledKernel kernel;
  kernel.rows = means.transpose() * ds.descriptors;
  kernel.sample_ids = std::move(ids);
  return kernel;
}

}  // namespace prolfa
