#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prolfa/harness/metrics.hpp"
#include "prolfa/hyperparameters.hpp"
#include "prolfa/solver.hpp"

namespace prolfa {

enum class EvalProtocol { Classification, Retrieval };

struct EvalOptions {
  EvalProtocol protocol = EvalProtocol::Classification;
  int k = 1;
  DistanceMetric metric = DistanceMetric::Euclidean;
  double minkowski_p = 3.0;
  bool normalize = false;
  bool semi = false;  // train_fraction becomes the labeled fraction
  int threads = 1;
};

struct EvalReport {
  std::string task;
  std::vector<double> values;       // one metric value per repetition
  std::vector<std::uint32_t> seeds; // per-repetition seeds
  std::vector<double> seconds;      // per-repetition wall clock
  int repetitions = 0;

  double mean() const;
  double stddev() const;
  // Deterministic fields only (wall clock excluded).
  bool same_results(const EvalReport& other) const;
};

std::string report_to_text(const EvalReport& report, const std::string& comment = "");

// Deterministic per-repetition seed derivation (splitmix-style).
std::uint32_t derive_seed(std::uint32_t seed, int repetition);

// Stratified per-class sample split; fractions preserved within +-1 sample,
// at least one sample on each side per class.
struct SplitIndices {
  std::vector<Index> train;
  std::vector<Index> test;
};
SplitIndices stratified_split(const std::vector<int>& labels, double train_fraction,
                              std::uint32_t seed);

// Build the sub-dataset owning the given samples (descriptor columns,
// partition and response rows restricted; order preserved).
DescriptorDataset subset_samples(const DescriptorDataset& ds, const std::vector<Index>& samples);

// Class labels from one-hot responses (argmax per row).
std::vector<int> labels_from_responses(const Matrix& responses);

// Split, train, aggregate and score, repeated with derived seeds.
EvalReport evaluate_split(const DescriptorDataset& ds, double train_fraction,
                          const Hyperparameters& hyper, const EvalOptions& opts,
                          int repetitions, std::uint32_t seed);

// One labeled-fraction comparison: semi-supervised training on the full
// dataset versus supervised training on the labeled subset, both scored by
// k-NN on the held-out (unlabeled) samples.
struct SemiComparison {
  double semi_accuracy = 0.0;
  double supervised_accuracy = 0.0;
};
SemiComparison compare_semi_supervised(const DescriptorDataset& ds, double labeled_fraction,
                                       const Hyperparameters& hyper, const EvalOptions& opts,
                                       std::uint32_t seed);

// Grid sweep over lambda1 or the prototype count. Each grid point trains on
// the full dataset (for the exclusivity/objective series) and runs
// evaluate_split for the metric series.
struct SweepPoint {
  double value = 0.0;
  EvalReport report;
  double exclusivity = 0.0;
  double final_objective = 0.0;
  double train_seconds = 0.0;
};
enum class SweepParameter { Lambda1, Prototypes };
std::vector<SweepPoint> run_sweep(const DescriptorDataset& ds, SweepParameter parameter,
                                  const std::vector<double>& grid, double train_fraction,
                                  const Hyperparameters& base, const EvalOptions& opts,
                                  int repetitions, std::uint32_t seed);

// Wall-clock training time over a descriptor-count grid on synthetic data
// (sample count fixed so the cost stays linear in N), plus a least-squares
// line fit.
struct TimingBenchmark {
  std::vector<Index> descriptor_counts;
  std::vector<double> seconds;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
TimingBenchmark run_timing_benchmark(const std::vector<Index>& n_grid, int dim,
                                     const Hyperparameters& hyper, int n_samples = 25,
                                     int threads = 1);

}  // namespace prolfa
