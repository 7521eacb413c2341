#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prolfa/dataset.hpp"
#include "prolfa/hyperparameters.hpp"

namespace prolfa {

inline constexpr std::uint16_t kModelFormatVersion = 1;

// Persisted training artifact. The prototype book is the product of the
// training descriptors with the final selection matrix, so encoding a new
// sample never needs the training set itself.
struct PrototypeModel {
  Matrix prototype_book;  // d x d_bar
  Matrix projection;      // d_bar x c
  Hyperparameters hyper;
  Matrix selection;                         // N x d_bar when stored, else 0x0
  std::vector<std::uint32_t> selection_peak;  // per column: row of the largest entry
  std::uint32_t descriptor_dim = 0;   // d
  std::uint32_t descriptor_count = 0; // N
  std::uint32_t sample_count = 0;     // m
  std::uint32_t response_dim = 0;     // c
  std::uint16_t format_version = kModelFormatVersion;
  std::string metadata;

  bool has_selection() const { return selection.size() > 0; }
};

}  // namespace prolfa
