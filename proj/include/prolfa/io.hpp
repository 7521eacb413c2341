#pragma once

#include <cstdint>
#include <string>

#include "prolfa/dataset.hpp"
#include "prolfa/model.hpp"

namespace prolfa {

inline constexpr std::uint16_t kDatasetFormatVersion = 1;

// Binary dataset container ("PLFA"): see README for the exact byte layout.
// Round trip is bit-exact, including the optional metadata block.
void write_descriptor_file(const DescriptorDataset& ds, const std::string& path);
DescriptorDataset read_descriptor_file(const std::string& path);

// Binary model container ("PLFM"). When the model stores a selection matrix
// and `training_descriptors` is supplied, saving verifies that the prototype
// book equals descriptors * selection and refuses to write otherwise.
void save_model(const PrototypeModel& model, const std::string& path,
                const Matrix* training_descriptors = nullptr);
PrototypeModel load_model(const std::string& path);

// Plain-text import for small data: one descriptor per line, sample id in the
// first column, coordinates after it. Rows of one sample must be consecutive.
DescriptorDataset read_descriptor_csv(const std::string& path);

}  // namespace prolfa
