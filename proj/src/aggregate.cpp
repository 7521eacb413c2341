#include "prolfa/aggregate.hpp"

#include <cstdio>
#include <fstream>

namespace prolfa {
namespace {

void maybe_normalize(AggregatedRepresentation& rep, bool normalize) {
  rep.normalized = normalize;
  if (!normalize) return;
  const double norm = rep.values.norm();
  if (norm > 0) rep.values /= norm;  // zero vectors stay zero, flag recorded
}

}  // namespace

std::vector<AggregatedRepresentation> aggregate_training(const DescriptorDataset& ds,
                                                         const Matrix& selection, bool normalize) {
  if (selection.size() == 0) throw Error("aggregate_training: selection matrix is missing");
  if (selection.rows() != ds.descriptor_count())
    throw Error("aggregate_training: selection has " + std::to_string(selection.rows()) +
                " rows, dataset has " + std::to_string(ds.descriptor_count()) + " descriptors");
  const GroupWeights weights = build_group_weights(ds.partition);
  const BundledKernel kernel = build_bundled_kernel(ds, weights, false);
  const Matrix pooled = kernel.rows * selection;
  std::vector<AggregatedRepresentation> reps(static_cast<std::size_t>(pooled.rows()));
  for (Index i = 0; i < pooled.rows(); ++i) {
    reps[static_cast<std::size_t>(i)].values = pooled.row(i).transpose();
    reps[static_cast<std::size_t>(i)].sample_id = i;
    maybe_normalize(reps[static_cast<std::size_t>(i)], normalize);
  }
  return reps;
}

std::vector<AggregatedRepresentation> aggregate_training(const DescriptorDataset& ds,
                                                         const PrototypeModel& model,
                                                         bool normalize) {
  if (!model.has_selection())
    throw Error("aggregate_training: model stores no selection matrix");
  return aggregate_training(ds, model.selection, normalize);
}

AggregatedRepresentation aggregate_new(const Matrix& new_descriptors, const PrototypeModel& model,
                                       bool normalize) {
  if (new_descriptors.cols() == 0) throw Error("aggregate_new: sample has no descriptors");
  if (new_descriptors.rows() != static_cast<Index>(model.descriptor_dim))
    throw Error("aggregate_new: descriptor dimension " + std::to_string(new_descriptors.rows()) +
                " != model dimension " + std::to_string(model.descriptor_dim));
  AggregatedRepresentation rep;
  rep.values = model.prototype_book.transpose() * new_descriptors.rowwise().mean();
  maybe_normalize(rep, normalize);
  return rep;
}

std::vector<AggregatedRepresentation> aggregate_unlabeled(const DescriptorDataset& ds,
                                                          const PrototypeModel& model,
                                                          bool normalize) {
  if (!ds.has_label_mask()) throw Error("aggregate_unlabeled: dataset has no label mask");
  std::vector<AggregatedRepresentation> reps;
  for (Index i : ds.unlabeled_indices()) {
    AggregatedRepresentation rep = aggregate_new(ds.sample_block(i), model, normalize);
    rep.sample_id = i;
    reps.push_back(std::move(rep));
  }
  return reps;
}

Matrix predict_responses(const std::vector<AggregatedRepresentation>& reps,
                         const PrototypeModel& model) {
  if (model.projection.size() == 0) throw Error("predict_responses: model has no projection");
  Matrix out(static_cast<Index>(reps.size()), model.projection.cols());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].values.size() != model.projection.rows())
      throw Error("predict_responses: representation " + std::to_string(i) + " has length " +
                  std::to_string(reps[i].values.size()) + ", projection expects " +
                  std::to_string(model.projection.rows()));
    out.row(static_cast<Index>(i)) = reps[i].values.transpose() * model.projection;
  }
  return out;
}

Matrix representations_matrix(const std::vector<AggregatedRepresentation>& reps) {
  if (reps.empty()) return Matrix(0, 0);
  Matrix out(static_cast<Index>(reps.size()), reps.front().values.size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].values.size() != out.cols())
      throw Error("representations_matrix: inconsistent lengths");
    out.row(static_cast<Index>(i)) = reps[i].values.transpose();
  }
  return out;
}

void write_representations_csv(const std::vector<AggregatedRepresentation>& reps,
                               const std::string& path, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  if (!comment.empty()) {
    std::size_t start = 0;
    while (start <= comment.size()) {
      const std::size_t end = comment.find('\n', start);
      out << "# " << comment.substr(start, end == std::string::npos ? end : end - start) << "\n";
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  const Index width = reps.empty() ? 0 : reps.front().values.size();
  out << "sample";
  for (Index k = 0; k < width; ++k) out << ",v" << k;
  out << "\n";
  char buf[40];
  for (const auto& rep : reps) {
    out << rep.sample_id;
    for (Index k = 0; k < rep.values.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", rep.values[k]);
      out << ',' << buf;
    }
    out << "\n";
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace prolfa
