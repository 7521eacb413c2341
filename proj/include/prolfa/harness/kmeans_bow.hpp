#pragma once

#include <cstdint>
#include <vector>

#include "prolfa/aggregate.hpp"
#include "prolfa/dataset.hpp"

namespace prolfa {

// Bag-of-words baseline: k-means codebook over all descriptors (k-means++
// seeding from the given seed, Lloyd iterations capped at 100, empty clusters
// re-seeded from the farthest point), then an l1-normalized histogram of hard
// assignments per sample.
std::vector<AggregatedRepresentation> kmeans_bow_baseline(const DescriptorDataset& ds,
                                                          Index codebook_size,
                                                          std::uint32_t seed);

}  // namespace prolfa
