#include "prolfa/harness/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "prolfa/aggregate.hpp"
#include "prolfa/harness/synthetic.hpp"

namespace prolfa {
namespace {

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw Error("accuracy: prediction/label size mismatch");
  int hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

std::vector<std::uint8_t> mask_from_indices(Index m, const std::vector<Index>& labeled) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(m), 0);
  for (Index i : labeled) mask[static_cast<std::size_t>(i)] = 1;
  return mask;
}

// Average precision of the same-class protocol with the query removed from
// the ranked list, one query at a time.
double retrieval_map(const DescriptorDataset& ds, const Matrix& all_rows,
                     const std::vector<int>& labels, const std::vector<Index>& queries,
                     const EvalOptions& opts) {
  const Index m = all_rows.rows();
  double sum = 0.0;
  int counted = 0;
  for (Index q : queries) {
    Matrix db(m - 1, all_rows.cols());
    std::vector<std::vector<char>> relevance(1);
    relevance[0].resize(static_cast<std::size_t>(m) - 1);
    Index r = 0;
    for (Index i = 0; i < m; ++i) {
      if (i == q) continue;
      db.row(r) = all_rows.row(i);
      relevance[0][static_cast<std::size_t>(r)] =
          labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(q)] ? 1 : 0;
      ++r;
    }
    const bool any_relevant =
        std::any_of(relevance[0].begin(), relevance[0].end(), [](char v) { return v != 0; });
    if (!any_relevant) continue;  // matches the excluded-query rule
    sum += mean_average_precision(all_rows.row(q), db, relevance, opts.metric, opts.minkowski_p);
    ++counted;
  }
  if (counted == 0) throw Error("retrieval protocol: no query had a same-class item");
  (void)ds;
  return sum / static_cast<double>(counted);
}

}  // namespace

double EvalReport::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double EvalReport::stddev() const {
  if (values.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

bool EvalReport::same_results(const EvalReport& other) const {
  return task == other.task && repetitions == other.repetitions && values == other.values &&
         seeds == other.seeds;
}

std::string report_to_text(const EvalReport& report, const std::string& comment) {
  std::ostringstream oss;
  char buf[40];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) oss << "# " << line << "\n";
  }
  oss << "task=" << report.task << "\n";
  oss << "repetitions=" << report.repetitions << "\n";
  oss << "mean=" << fmt(report.mean()) << "\n";
  oss << "std=" << fmt(report.stddev()) << "\n";
  oss << "values=";
  for (std::size_t i = 0; i < report.values.size(); ++i) oss << (i ? "," : "") << fmt(report.values[i]);
  oss << "\n";
  oss << "seeds=";
  for (std::size_t i = 0; i < report.seeds.size(); ++i) oss << (i ? "," : "") << report.seeds[i];
  oss << "\n";
  oss << "seconds=";
  for (std::size_t i = 0; i < report.seconds.size(); ++i) oss << (i ? "," : "") << fmt(report.seconds[i]);
  oss << "\n";
  return oss.str();
}

std::uint32_t derive_seed(std::uint32_t seed, int repetition) {
  std::uint64_t z = (static_cast<std::uint64_t>(seed) << 32) ^
                    (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(repetition + 1));
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return static_cast<std::uint32_t>(z & 0xffffffffu);
}

SplitIndices stratified_split(const std::vector<int>& labels, double train_fraction,
                              std::uint32_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("stratified_split: train fraction must lie in (0, 1)");
  std::map<int, std::vector<Index>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<Index>(i));

  std::mt19937_64 rng(seed);
  SplitIndices split;
  for (auto& [cls, members] : by_class) {
    if (members.size() < 2)
      throw Error("stratified_split: class " + std::to_string(cls) +
                  " has fewer than 2 samples");
    std::shuffle(members.begin(), members.end(), rng);
    const auto n = static_cast<long>(members.size());
    long take = std::lround(train_fraction * static_cast<double>(n));
    take = std::clamp(take, 1l, n - 1);
    for (long i = 0; i < n; ++i)
      (i < take ? split.train : split.test).push_back(members[static_cast<std::size_t>(i)]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

DescriptorDataset subset_samples(const DescriptorDataset& ds, const std::vector<Index>& samples) {
  DescriptorDataset out;
  Index total = 0;
  for (Index s : samples) total += ds.sample_size(s);
  out.descriptors.resize(ds.dim(), total);
  out.partition.reserve(samples.size());
  if (ds.has_responses()) out.responses.resize(static_cast<Index>(samples.size()), ds.response_dim());
  if (ds.has_label_mask()) out.label_mask.reserve(samples.size());
  Index col = 0;
  Index row = 0;
  for (Index s : samples) {
    out.descriptors.middleCols(col, ds.sample_size(s)) = ds.sample_block(s);
    col += ds.sample_size(s);
    out.partition.push_back(static_cast<std::uint32_t>(ds.sample_size(s)));
    if (ds.has_responses()) out.responses.row(row++) = ds.responses.row(s);
    if (ds.has_label_mask()) out.label_mask.push_back(ds.label_mask[static_cast<std::size_t>(s)]);
  }
  return out;
}

std::vector<int> labels_from_responses(const Matrix& responses) {
  std::vector<int> labels(static_cast<std::size_t>(responses.rows()));
  for (Index i = 0; i < responses.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < responses.cols(); ++j)
      if (responses(i, j) > responses(i, best)) best = j;
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

EvalReport evaluate_split(const DescriptorDataset& ds, double train_fraction,
                          const Hyperparameters& hyper, const EvalOptions& opts, int repetitions,
                          std::uint32_t seed) {
  if (repetitions < 1) throw Error("evaluate_split: repetitions must be at least 1");
  if (!ds.has_responses()) throw Error("evaluate_split: dataset has no responses");
  const std::vector<int> labels = labels_from_responses(ds.responses);

  EvalReport report;
  report.task = opts.protocol == EvalProtocol::Classification ? "classification" : "retrieval";
  report.repetitions = repetitions;

  for (int rep = 0; rep < repetitions; ++rep) {
    const std::uint32_t rep_seed = derive_seed(seed, rep);
    const auto t0 = std::chrono::steady_clock::now();
    Hyperparameters h = hyper;
    h.seed = rep_seed;
    const SplitIndices split = stratified_split(labels, train_fraction, rep_seed);

    double value = 0.0;
    if (opts.semi) {
      DescriptorDataset masked = ds;
      masked.label_mask = mask_from_indices(ds.sample_count(), split.train);
      const TrainResult result = train_semi(masked, h, opts.threads);
      const auto reps = aggregate_training(masked, result.model, opts.normalize);
      const Matrix rows = representations_matrix(reps);
      if (opts.protocol == EvalProtocol::Classification) {
        Matrix ref_rows(static_cast<Index>(split.train.size()), rows.cols());
        std::vector<int> ref_labels;
        for (std::size_t i = 0; i < split.train.size(); ++i) {
          ref_rows.row(static_cast<Index>(i)) = rows.row(split.train[i]);
          ref_labels.push_back(labels[static_cast<std::size_t>(split.train[i])]);
        }
        Matrix probe_rows(static_cast<Index>(split.test.size()), rows.cols());
        std::vector<int> probe_labels;
        for (std::size_t i = 0; i < split.test.size(); ++i) {
          probe_rows.row(static_cast<Index>(i)) = rows.row(split.test[i]);
          probe_labels.push_back(labels[static_cast<std::size_t>(split.test[i])]);
        }
        value = accuracy(
            knn_classify(ref_rows, ref_labels, probe_rows, opts.k, opts.metric, opts.minkowski_p),
            probe_labels);
      } else {
        std::vector<Index> queries(static_cast<std::size_t>(ds.sample_count()));
        std::iota(queries.begin(), queries.end(), Index{0});
        value = retrieval_map(ds, rows, labels, queries, opts);
      }
    } else {
      const DescriptorDataset train_ds = subset_samples(ds, split.train);
      const TrainResult result = train(train_ds, h, opts.threads);
      if (opts.protocol == EvalProtocol::Classification) {
        const auto train_reps = aggregate_training(train_ds, result.model, opts.normalize);
        const Matrix ref_rows = representations_matrix(train_reps);
        std::vector<int> ref_labels;
        for (Index s : split.train) ref_labels.push_back(labels[static_cast<std::size_t>(s)]);
        Matrix probe_rows(static_cast<Index>(split.test.size()),
                          static_cast<Index>(hyper.prototypes));
        std::vector<int> probe_labels;
        for (std::size_t i = 0; i < split.test.size(); ++i) {
          AggregatedRepresentation rep =
              aggregate_new(ds.sample_block(split.test[i]), result.model, opts.normalize);
          probe_rows.row(static_cast<Index>(i)) = rep.values.transpose();
          probe_labels.push_back(labels[static_cast<std::size_t>(split.test[i])]);
        }
        value = accuracy(
            knn_classify(ref_rows, ref_labels, probe_rows, opts.k, opts.metric, opts.minkowski_p),
            probe_labels);
      } else {
        Matrix rows(ds.sample_count(), static_cast<Index>(hyper.prototypes));
        for (Index s = 0; s < ds.sample_count(); ++s)
          rows.row(s) =
              aggregate_new(ds.sample_block(s), result.model, opts.normalize).values.transpose();
        value = retrieval_map(ds, rows, labels, split.test, opts);
      }
    }

    report.values.push_back(value);
    report.seeds.push_back(rep_seed);
    report.seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return report;
}

SemiComparison compare_semi_supervised(const DescriptorDataset& ds, double labeled_fraction,
                                       const Hyperparameters& hyper, const EvalOptions& opts,
                                       std::uint32_t seed) {
  if (!ds.has_responses()) throw Error("compare_semi_supervised: dataset has no responses");
  const std::vector<int> labels = labels_from_responses(ds.responses);
  const SplitIndices split = stratified_split(labels, labeled_fraction, seed);

  std::vector<int> labeled_labels;
  for (Index s : split.train) labeled_labels.push_back(labels[static_cast<std::size_t>(s)]);
  std::vector<int> held_labels;
  for (Index s : split.test) held_labels.push_back(labels[static_cast<std::size_t>(s)]);

  Hyperparameters h = hyper;
  h.seed = seed;
  SemiComparison cmp;

  {
    DescriptorDataset masked = ds;
    masked.label_mask = mask_from_indices(ds.sample_count(), split.train);
    const TrainResult result = train_semi(masked, h, opts.threads);
    const Matrix rows =
        representations_matrix(aggregate_training(masked, result.model, opts.normalize));
    Matrix ref_rows(static_cast<Index>(split.train.size()), rows.cols());
    for (std::size_t i = 0; i < split.train.size(); ++i)
      ref_rows.row(static_cast<Index>(i)) = rows.row(split.train[i]);
    Matrix probe_rows(static_cast<Index>(split.test.size()), rows.cols());
    for (std::size_t i = 0; i < split.test.size(); ++i)
      probe_rows.row(static_cast<Index>(i)) = rows.row(split.test[i]);
    cmp.semi_accuracy = accuracy(
        knn_classify(ref_rows, labeled_labels, probe_rows, opts.k, opts.metric, opts.minkowski_p),
        held_labels);
  }
  {
    const DescriptorDataset labeled_ds = subset_samples(ds, split.train);
    const TrainResult result = train(labeled_ds, h, opts.threads);
    const Matrix ref_rows =
        representations_matrix(aggregate_training(labeled_ds, result.model, opts.normalize));
    Matrix probe_rows(static_cast<Index>(split.test.size()), ref_rows.cols());
    for (std::size_t i = 0; i < split.test.size(); ++i)
      probe_rows.row(static_cast<Index>(i)) =
          aggregate_new(ds.sample_block(split.test[i]), result.model, opts.normalize)
              .values.transpose();
    cmp.supervised_accuracy = accuracy(
        knn_classify(ref_rows, labeled_labels, probe_rows, opts.k, opts.metric, opts.minkowski_p),
        held_labels);
  }
  return cmp;
}

std::vector<SweepPoint> run_sweep(const DescriptorDataset& ds, SweepParameter parameter,
                                  const std::vector<double>& grid, double train_fraction,
                                  const Hyperparameters& base, const EvalOptions& opts,
                                  int repetitions, std::uint32_t seed) {
  if (grid.empty()) throw Error("run_sweep: empty grid");
  std::vector<SweepPoint> points;
  for (double value : grid) {
    Hyperparameters h = base;
    if (parameter == SweepParameter::Lambda1) {
      h.lambda1 = value;
    } else {
      if (!(value >= 1) || value != std::floor(value))
        throw Error("run_sweep: prototype grid values must be positive integers");
      h.prototypes = static_cast<std::uint32_t>(value);
    }

    SweepPoint point;
    point.value = value;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const TrainResult full = train(ds, h, opts.threads);
      point.train_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      point.exclusivity = exclusivity_penalty(full.model.selection);
      point.final_objective = full.state.objective_trace.back().second;
      point.report = evaluate_split(ds, train_fraction, h, opts, repetitions, seed);
    } catch (const Error& e) {
      throw Error("sweep point " + std::to_string(value) + ": " + e.what());
    }
    points.push_back(std::move(point));
  }
  return points;
}

TimingBenchmark run_timing_benchmark(const std::vector<Index>& n_grid, int dim,
                                     const Hyperparameters& hyper, int n_samples, int threads) {
  if (n_grid.empty()) throw Error("run_timing_benchmark: empty grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw Error("run_timing_benchmark: grid must ascend");

  TimingBenchmark bench;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const Index n = n_grid[i];
    if (n % n_samples != 0)
      throw Error("run_timing_benchmark: " + std::to_string(n) + " is not divisible by " +
                  std::to_string(n_samples) + " samples");
    SyntheticSpec spec;
    spec.n_points = static_cast<int>(n);
    spec.n_samples = n_samples;
    spec.points_per_sample = static_cast<int>(n) / n_samples;
    spec.n_classes = 2;
    spec.dim = dim;
    spec.seed = derive_seed(hyper.seed, static_cast<int>(i));
    const DescriptorDataset ds = generate_synthetic(spec);

    const auto t0 = std::chrono::steady_clock::now();
    (void)train(ds, hyper, threads);
    bench.seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    bench.descriptor_counts.push_back(n);
  }

  // least-squares line fit seconds ~ slope * N + intercept
  const std::size_t n = bench.seconds.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += static_cast<double>(bench.descriptor_counts[i]);
    mean_y += bench.seconds[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(bench.descriptor_counts[i]) - mean_x;
    const double dy = bench.seconds[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  bench.slope = sxx > 0 ? sxy / sxx : 0.0;
  bench.intercept = mean_y - bench.slope * mean_x;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = bench.intercept + bench.slope * static_cast<double>(bench.descriptor_counts[i]);
    ss_res += (bench.seconds[i] - fit) * (bench.seconds[i] - fit);
  }
  bench.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return bench;
}

}  // namespace prolfa
