#pragma once

#include <string>
#include <vector>

#include "prolfa/dataset.hpp"
#include "prolfa/kernel.hpp"
#include "prolfa/model.hpp"

namespace prolfa {

struct AggregatedRepresentation {
  Vector values;
  Index sample_id = 0;
  bool normalized = false;
};

// Training-side encode: representation i = kernel row i times the selection
// matrix. Works for every sample of the dataset the solver saw.
std::vector<AggregatedRepresentation> aggregate_training(const DescriptorDataset& ds,
                                                         const Matrix& selection,
                                                         bool normalize = false);
std::vector<AggregatedRepresentation> aggregate_training(const DescriptorDataset& ds,
                                                         const PrototypeModel& model,
                                                         bool normalize = false);

// Encode a new sample from the prototype book alone: mean of the new
// descriptors' inner products with each prototype.
AggregatedRepresentation aggregate_new(const Matrix& new_descriptors, const PrototypeModel& model,
                                       bool normalize = false);

// Encode every mask-false sample through the prototype book.
std::vector<AggregatedRepresentation> aggregate_unlabeled(const DescriptorDataset& ds,
                                                          const PrototypeModel& model,
                                                          bool normalize = false);

// Rows = representation * projection; for one-hot-trained classification the
// argmax of a row is the predicted class.
Matrix predict_responses(const std::vector<AggregatedRepresentation>& reps,
                         const PrototypeModel& model);

// Stack representations as matrix rows (row order = input order).
Matrix representations_matrix(const std::vector<AggregatedRepresentation>& reps);

// CSV export: optional '#'-prefixed comment block, then a header row and one
// line per sample.
void write_representations_csv(const std::vector<AggregatedRepresentation>& reps,
                               const std::string& path, const std::string& comment = "");

}  // namespace prolfa
