// prolfa: prototype-selection local feature aggregation toolkit.
//
// Exit codes: 0 success (training converged), 2 finished but an iteration
// cap was hit, 3 flag/config errors, 4 data/model/numeric errors,
// 5 unexpected internal errors.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "prolfa/aggregate.hpp"
#include "prolfa/common.hpp"
#include "prolfa/harness/evaluate.hpp"
#include "prolfa/harness/kmeans_bow.hpp"
#include "prolfa/harness/synthetic.hpp"
#include "prolfa/io.hpp"
#include "prolfa/solver.hpp"

namespace {

using prolfa::Index;
using prolfa::Matrix;

constexpr int kExitOk = 0;
constexpr int kExitCapsHit = 2;
constexpr int kExitUsage = 3;
constexpr int kExitData = 4;
constexpr int kExitInternal = 5;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class ConfigEcho {
 public:
  explicit ConfigEcho(const std::string& command) {
    add("tool", std::string("prolfa ") + prolfa::kVersion);
    add("command", command);
  }
  void add(const std::string& key, const std::string& value) { lines_.push_back(key + "=" + value); }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add_hyper(const prolfa::Hyperparameters& h) {
    add("lambda1", h.lambda1);
    add("lambda2", h.lambda2);
    add("mu", h.mu);
    add("prototypes", static_cast<long long>(h.prototypes));
    add("eps_reweight", h.eps_reweight);
    add("tol_inner_row", h.tol_inner_row);
    add("tol_admm", h.tol_admm);
    add("tol_outer", h.tol_outer);
    add("max_inner_row", static_cast<long long>(h.max_inner_row));
    add("max_admm", static_cast<long long>(h.max_admm));
    add("max_outer", static_cast<long long>(h.max_outer));
    add("seed", static_cast<long long>(h.seed));
  }
  std::string text() const {
    std::string out;
    for (const auto& line : lines_) out += line + "\n";
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

void write_csv(const std::string& path, const std::string& comment, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw prolfa::Error("cannot open '" + path + "' for writing");
  std::istringstream lines(comment);
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << "\n";
  out << header << "\n";
  for (const auto& row : rows) out << row << "\n";
  if (!out) throw prolfa::Error("write to '" + path + "' failed");
}

struct HyperFlags {
  prolfa::Hyperparameters hyper;
  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda1", hyper.lambda1, "exclusivity weight")->capture_default_str();
    cmd->add_option("--lambda2", hyper.lambda2, "projection ridge weight")->capture_default_str();
    cmd->add_option("--mu", hyper.mu, "consensus penalty")->capture_default_str();
    cmd->add_option("--prototypes", hyper.prototypes, "prototype count (selection columns)")
        ->capture_default_str();
    cmd->add_option("--eps-reweight", hyper.eps_reweight, "reweight denominator guard")
        ->capture_default_str();
    cmd->add_option("--tol-inner-row", hyper.tol_inner_row, "row solve tolerance")
        ->capture_default_str();
    cmd->add_option("--tol-admm", hyper.tol_admm, "consensus stopping tolerance")
        ->capture_default_str();
    cmd->add_option("--tol-outer", hyper.tol_outer, "objective-change stopping tolerance")
        ->capture_default_str();
    cmd->add_option("--max-inner-row", hyper.max_inner_row, "row solve sweep cap")
        ->capture_default_str();
    cmd->add_option("--max-admm", hyper.max_admm, "consensus iteration cap")->capture_default_str();
    cmd->add_option("--max-outer", hyper.max_outer, "outer iteration cap")->capture_default_str();
    cmd->add_option("--seed", hyper.seed, "random seed")->capture_default_str();
  }
};

struct MetricFlags {
  std::string metric = "euclidean";
  double p = 3.0;
  int k = 1;
  void attach(CLI::App* cmd) {
    cmd->add_option("--metric", metric, "euclidean|cosine|mahalanobis|minkowski")
        ->capture_default_str();
    cmd->add_option("--p", p, "minkowski exponent")->capture_default_str();
    cmd->add_option("--k", k, "neighbor count")->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
};

int attach_threads(CLI::App* cmd, int& threads) {
  cmd->add_option("--threads", threads, "worker threads (env PROLFA_THREADS)")
      ->envname("PROLFA_THREADS")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  return 0;
}

std::vector<double> parse_grid_values(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw prolfa::Error("malformed grid value '" + cell + "'");
    }
  }
  if (values.empty()) throw prolfa::Error("grid is empty");
  return values;
}

// ---------------------------------------------------------------- synth ----

int cmd_synth(const prolfa::SyntheticSpec& spec, const std::string& output) {
  const auto issues = prolfa::validate_synthetic_spec(spec);
  if (!issues.empty()) {
    for (const auto& msg : issues) std::cerr << "error: " << msg << "\n";
    return kExitUsage;
  }
  ConfigEcho echo("synth");
  echo.add("n_points", static_cast<long long>(spec.n_points));
  echo.add("n_samples", static_cast<long long>(spec.n_samples));
  echo.add("points_per_sample", static_cast<long long>(spec.points_per_sample));
  echo.add("n_classes", static_cast<long long>(spec.n_classes));
  echo.add("dim", static_cast<long long>(spec.dim));
  echo.add("class_separation", spec.class_separation);
  echo.add("noise_sigma", spec.noise_sigma);
  echo.add("seed", static_cast<long long>(spec.seed));
  echo.add("output", output);

  prolfa::DescriptorDataset ds = prolfa::generate_synthetic(spec);
  ds.metadata = echo.text();
  prolfa::write_descriptor_file(ds, output);
  std::cout << "wrote dataset: N=" << ds.descriptor_count() << " descriptors, m="
            << ds.sample_count() << " samples, classes=" << ds.response_dim()
            << ", d=" << ds.dim() << " -> " << output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- train ----

int cmd_train(const std::string& input, const std::string& output, const std::string& trace_path,
              bool semi, bool skip_selection, const prolfa::Hyperparameters& hyper, int threads) {
  const prolfa::DescriptorDataset ds = prolfa::read_descriptor_file(input);
  const auto issues = prolfa::validate_dataset(ds);
  if (!issues.empty()) {
    for (const auto& msg : issues) std::cerr << "error: " << msg << "\n";
    return kExitData;
  }

  ConfigEcho echo("train");
  echo.add("input", input);
  echo.add("output", output);
  echo.add("trace", trace_path);
  echo.add("semi", semi);
  echo.add("store_selection", !skip_selection);
  echo.add_hyper(hyper);
  echo.add("threads", static_cast<long long>(threads));

  prolfa::TrainResult result =
      semi ? prolfa::train_semi(ds, hyper, threads) : prolfa::train(ds, hyper, threads);

  if (result.state.clamped_steps > 0)
    std::cerr << "warning: " << result.state.clamped_steps
              << " row steps hit the denominator guard\n";
  if (result.state.row_cap_hits > 0)
    std::cerr << "warning: " << result.state.row_cap_hits
              << " row solves stopped at the sweep cap\n";

  result.model.metadata = echo.text();
  if (skip_selection) {
    result.model.selection.resize(0, 0);
    result.model.selection_peak.clear();
  }
  prolfa::save_model(result.model, output, &ds.descriptors);

  std::vector<std::string> rows;
  for (const auto& rec : result.state.outer_trace) {
    rows.push_back(std::to_string(rec.iteration) + "," + fmt(rec.objective_value) + "," +
                   fmt(rec.consensus_gap) + "," + fmt(rec.exclusivity) + "," + fmt(rec.seconds));
  }
  write_csv(trace_path, echo.text(), "iteration,objective,consensus_gap,exclusivity,seconds", rows);

  const auto& trace = result.state.objective_trace;
  std::cout << "trained " << (semi ? "semi-supervised" : "supervised") << " model: "
            << trace.size() - 1 << " outer iterations, objective " << fmt(trace.front().second)
            << " -> " << fmt(trace.back().second)
            << (result.state.outer_converged ? " (converged)" : " (outer cap reached)") << "\n";
  std::cout << "model -> " << output << "\ntrace -> " << trace_path << "\n";
  return result.state.outer_converged ? kExitOk : kExitCapsHit;
}

// ------------------------------------------------------------ aggregate ----

int cmd_aggregate(const std::string& input, const std::string& model_path,
                  const std::string& output, bool normalize, const std::string& format) {
  const prolfa::DescriptorDataset ds = prolfa::read_descriptor_file(input);
  const auto issues = prolfa::validate_dataset(ds);
  if (!issues.empty()) {
    for (const auto& msg : issues) std::cerr << "error: " << msg << "\n";
    return kExitData;
  }
  const prolfa::PrototypeModel model = prolfa::load_model(model_path);

  ConfigEcho echo("aggregate");
  echo.add("input", input);
  echo.add("model", model_path);
  echo.add("output", output);
  echo.add("normalize", normalize);
  echo.add("format", format);

  std::vector<prolfa::AggregatedRepresentation> reps;
  reps.reserve(static_cast<std::size_t>(ds.sample_count()));
  for (Index i = 0; i < ds.sample_count(); ++i) {
    auto rep = prolfa::aggregate_new(ds.sample_block(i), model, normalize);
    rep.sample_id = i;
    reps.push_back(std::move(rep));
  }

  if (format == "csv") {
    prolfa::write_representations_csv(reps, output, echo.text());
  } else if (format == "binary") {
    // representations as a dataset container: one column per sample
    prolfa::DescriptorDataset out;
    out.descriptors = prolfa::representations_matrix(reps).transpose();
    out.partition.assign(static_cast<std::size_t>(ds.sample_count()), 1);
    out.metadata = echo.text();
    prolfa::write_descriptor_file(out, output);
  } else {
    std::cerr << "error: unknown format '" << format << "' (expected csv or binary)\n";
    return kExitUsage;
  }
  std::cout << "aggregated " << reps.size() << " samples -> " << output << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- eval ----

int cmd_eval(const std::string& input, const std::string& output, const std::string& protocol,
             double train_fraction, int repetitions, bool semi, bool normalize,
             const MetricFlags& metric_flags, const prolfa::Hyperparameters& hyper, int threads) {
  const prolfa::DescriptorDataset ds = prolfa::read_descriptor_file(input);
  prolfa::require_valid(ds);

  prolfa::EvalOptions opts;
  opts.protocol = protocol == "retrieval" ? prolfa::EvalProtocol::Retrieval
                                          : prolfa::EvalProtocol::Classification;
  if (protocol != "retrieval" && protocol != "classification")
    throw prolfa::Error("unknown protocol '" + protocol + "'");
  opts.k = metric_flags.k;
  opts.metric = prolfa::metric_from_string(metric_flags.metric);
  opts.minkowski_p = metric_flags.p;
  opts.normalize = normalize;
  opts.semi = semi;
  opts.threads = threads;

  ConfigEcho echo("eval");
  echo.add("input", input);
  echo.add("output", output);
  echo.add("protocol", protocol);
  echo.add("train_fraction", train_fraction);
  echo.add("repetitions", static_cast<long long>(repetitions));
  echo.add("semi", semi);
  echo.add("normalize", normalize);
  echo.add("k", static_cast<long long>(metric_flags.k));
  echo.add("metric", metric_flags.metric);
  echo.add("minkowski_p", metric_flags.p);
  echo.add_hyper(hyper);
  echo.add("threads", static_cast<long long>(threads));

  const prolfa::EvalReport report =
      prolfa::evaluate_split(ds, train_fraction, hyper, opts, repetitions, hyper.seed);

  std::ofstream out(output);
  if (!out) throw prolfa::Error("cannot open '" + output + "' for writing");
  out << prolfa::report_to_text(report, echo.text());
  if (!out) throw prolfa::Error("write to '" + output + "' failed");

  std::cout << report.task << " " << (semi ? "(semi-supervised) " : "") << "over "
            << repetitions << " repetitions: mean=" << fmt(report.mean())
            << " std=" << fmt(report.stddev()) << "\nreport -> " << output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- sweep ----

int cmd_sweep(const std::string& input, const std::string& output, const std::string& grid_spec,
              double train_fraction, int repetitions, bool semi, bool normalize,
              const MetricFlags& metric_flags, const prolfa::Hyperparameters& hyper, int threads) {
  const auto eq = grid_spec.find('=');
  if (eq == std::string::npos)
    throw prolfa::Error("malformed grid '" + grid_spec + "' (expected name=v1,v2,...)");
  const std::string name = grid_spec.substr(0, eq);
  prolfa::SweepParameter parameter;
  if (name == "lambda1") {
    parameter = prolfa::SweepParameter::Lambda1;
  } else if (name == "d_bar" || name == "prototypes") {
    parameter = prolfa::SweepParameter::Prototypes;
  } else {
    throw prolfa::Error("unknown grid parameter '" + name + "' (expected lambda1 or d_bar)");
  }
  const std::vector<double> values = parse_grid_values(grid_spec.substr(eq + 1));

  const prolfa::DescriptorDataset ds = prolfa::read_descriptor_file(input);
  prolfa::require_valid(ds);

  prolfa::EvalOptions opts;
  opts.k = metric_flags.k;
  opts.metric = prolfa::metric_from_string(metric_flags.metric);
  opts.minkowski_p = metric_flags.p;
  opts.normalize = normalize;
  opts.semi = semi;
  opts.threads = threads;

  ConfigEcho echo("sweep");
  echo.add("input", input);
  echo.add("output", output);
  echo.add("grid", grid_spec);
  echo.add("train_fraction", train_fraction);
  echo.add("repetitions", static_cast<long long>(repetitions));
  echo.add("semi", semi);
  echo.add("normalize", normalize);
  echo.add("k", static_cast<long long>(metric_flags.k));
  echo.add("metric", metric_flags.metric);
  echo.add_hyper(hyper);
  echo.add("threads", static_cast<long long>(threads));

  const auto points = prolfa::run_sweep(ds, parameter, values, train_fraction, hyper, opts,
                                        repetitions, hyper.seed);
  std::vector<std::string> rows;
  for (const auto& p : points) {
    rows.push_back(name + "," + fmt(p.value) + "," + fmt(p.report.mean()) + "," +
                   fmt(p.report.stddev()) + "," + fmt(p.exclusivity) + "," +
                   fmt(p.final_objective) + "," + fmt(p.train_seconds));
  }
  write_csv(output, echo.text(),
            "parameter,value,metric_mean,metric_std,exclusivity,objective,train_seconds", rows);
  std::cout << "swept " << points.size() << " grid points -> " << output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench ----

int cmd_bench(const std::string& output, const std::string& n_spec, int dim, int n_samples,
              const prolfa::Hyperparameters& hyper, int threads) {
  const std::vector<double> raw = parse_grid_values(n_spec);
  std::vector<Index> grid;
  for (double v : raw) {
    if (v < 1 || v != std::floor(v)) throw prolfa::Error("bench sizes must be positive integers");
    grid.push_back(static_cast<Index>(v));
  }

  ConfigEcho echo("bench");
  echo.add("output", output);
  echo.add("bench_N", n_spec);
  echo.add("dim", static_cast<long long>(dim));
  echo.add("bench_samples", static_cast<long long>(n_samples));
  echo.add_hyper(hyper);
  echo.add("threads", static_cast<long long>(threads));

  const prolfa::TimingBenchmark bench =
      prolfa::run_timing_benchmark(grid, dim, hyper, n_samples, threads);

  std::string comment = echo.text();
  comment += "fit_slope=" + fmt(bench.slope) + "\n";
  comment += "fit_intercept=" + fmt(bench.intercept) + "\n";
  comment += "fit_r2=" + fmt(bench.r_squared) + "\n";
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < bench.seconds.size(); ++i) {
    const double fitted =
        bench.intercept + bench.slope * static_cast<double>(bench.descriptor_counts[i]);
    rows.push_back(std::to_string(bench.descriptor_counts[i]) + "," + fmt(bench.seconds[i]) + "," +
                   fmt(fitted));
  }
  write_csv(output, comment, "n_descriptors,seconds,fit", rows);
  std::cout << "benchmark over " << grid.size() << " sizes: slope=" << fmt(bench.slope)
            << " s per descriptor, R2=" << fmt(bench.r_squared) << "\nseries -> " << output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prolfa: prototype-selection local feature aggregation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("prolfa ") + prolfa::kVersion);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic class-pure Gaussian dataset");
  synth->set_config("--config", "", "flat key=value config file; flags override");
  prolfa::SyntheticSpec spec;
  std::string synth_output;
  synth->add_option("--output", synth_output, "dataset file to write")->required();
  synth->add_option("--n-points", spec.n_points)->capture_default_str();
  synth->add_option("--n-samples", spec.n_samples)->capture_default_str();
  synth->add_option("--points-per-sample", spec.points_per_sample)->capture_default_str();
  synth->add_option("--n-classes", spec.n_classes)->capture_default_str();
  synth->add_option("--dim", spec.dim)->capture_default_str();
  synth->add_option("--class-separation", spec.class_separation)->capture_default_str();
  synth->add_option("--noise-sigma", spec.noise_sigma)->capture_default_str();
  synth->add_option("--seed", spec.seed)->capture_default_str();

  // train
  auto* train_cmd = app.add_subcommand("train", "fit a prototype model");
  train_cmd->set_config("--config", "", "flat key=value config file; flags override");
  std::string train_input, train_output, train_trace;
  bool train_semi_flag = false, train_skip_selection = false;
  int train_threads = 1;
  HyperFlags train_hyper;
  train_cmd->add_option("--input", train_input, "dataset file")->required();
  train_cmd->add_option("--output", train_output, "model file to write")->required();
  train_cmd->add_option("--trace", train_trace, "objective trace CSV (default <output>.trace.csv)");
  train_cmd->add_flag("--semi", train_semi_flag, "semi-supervised mode (needs a label mask)");
  train_cmd->add_flag("--no-store-selection", train_skip_selection,
                      "drop the selection matrix from the model file");
  train_hyper.attach(train_cmd);
  attach_threads(train_cmd, train_threads);

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "encode samples through a trained model");
  agg->set_config("--config", "", "flat key=value config file; flags override");
  std::string agg_input, agg_model, agg_output, agg_format = "csv";
  bool agg_normalize = false;
  agg->add_option("--input", agg_input, "dataset file")->required();
  agg->add_option("--model", agg_model, "model file")->required();
  agg->add_option("--output", agg_output, "representations file to write")->required();
  agg->add_flag("--normalize", agg_normalize, "l2-normalize representations");
  agg->add_option("--format", agg_format, "csv or binary")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "split/train/score evaluation harness");
  eval->set_config("--config", "", "flat key=value config file; flags override");
  std::string eval_input, eval_output, eval_protocol = "classification";
  double eval_fraction = 0.8;
  int eval_reps = 6;
  bool eval_semi = false, eval_normalize = false;
  int eval_threads = 1;
  MetricFlags eval_metric;
  HyperFlags eval_hyper;
  eval->add_option("--input", eval_input, "dataset file")->required();
  eval->add_option("--output", eval_output, "report file to write")->required();
  eval->add_option("--protocol", eval_protocol, "classification or retrieval")
      ->capture_default_str();
  eval->add_option("--train-fraction", eval_fraction,
                   "training fraction (labeled fraction with --semi)")
      ->capture_default_str();
  eval->add_option("--repetitions", eval_reps)->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_flag("--semi", eval_semi, "semi-supervised protocol");
  eval->add_flag("--normalize", eval_normalize, "l2-normalize representations before scoring");
  eval_metric.attach(eval);
  eval_hyper.attach(eval);
  attach_threads(eval, eval_threads);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid sweep over lambda1 or the prototype count");
  sweep->set_config("--config", "", "flat key=value config file; flags override");
  std::string sweep_input, sweep_output, sweep_grid;
  double sweep_fraction = 0.8;
  int sweep_reps = 6;
  bool sweep_semi = false, sweep_normalize = false;
  int sweep_threads = 1;
  MetricFlags sweep_metric;
  HyperFlags sweep_hyper;
  sweep->add_option("--input", sweep_input, "dataset file")->required();
  sweep->add_option("--output", sweep_output, "series CSV to write")->required();
  sweep->add_option("--grid", sweep_grid, "name=v1,v2,... with name lambda1 or d_bar")->required();
  sweep->add_option("--train-fraction", sweep_fraction)->capture_default_str();
  sweep->add_option("--repetitions", sweep_reps)->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_flag("--semi", sweep_semi, "semi-supervised evaluation");
  sweep->add_flag("--normalize", sweep_normalize);
  sweep_metric.attach(sweep);
  sweep_hyper.attach(sweep);
  attach_threads(sweep, sweep_threads);

  // bench
  auto* bench = app.add_subcommand("bench", "training-time scaling benchmark");
  bench->set_config("--config", "", "flat key=value config file; flags override");
  std::string bench_output, bench_n = "500,1000,2000,4000";
  int bench_dim = 16, bench_samples = 25, bench_threads = 1;
  HyperFlags bench_hyper;
  bench_hyper.hyper.prototypes = 16;
  bench->add_option("--output", bench_output, "series CSV to write")->required();
  bench->add_option("--bench-N", bench_n, "comma-separated descriptor counts")
      ->capture_default_str();
  bench->add_option("--dim", bench_dim, "descriptor dimension")->capture_default_str();
  bench->add_option("--bench-samples", bench_samples, "fixed sample count")->capture_default_str();
  bench_hyper.attach(bench);
  attach_threads(bench, bench_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(spec, synth_output);
    if (train_cmd->parsed()) {
      if (train_trace.empty()) train_trace = train_output + ".trace.csv";
      return cmd_train(train_input, train_output, train_trace, train_semi_flag,
                       train_skip_selection, train_hyper.hyper, train_threads);
    }
    if (agg->parsed())
      return cmd_aggregate(agg_input, agg_model, agg_output, agg_normalize, agg_format);
    if (eval->parsed())
      return cmd_eval(eval_input, eval_output, eval_protocol, eval_fraction, eval_reps, eval_semi,
                      eval_normalize, eval_metric, eval_hyper.hyper, eval_threads);
    if (sweep->parsed())
      return cmd_sweep(sweep_input, sweep_output, sweep_grid, sweep_fraction, sweep_reps,
                       sweep_semi, sweep_normalize, sweep_metric, sweep_hyper.hyper,
                       sweep_threads);
    if (bench->parsed())
      return cmd_bench(bench_output, bench_n, bench_dim, bench_samples, bench_hyper.hyper,
                       bench_threads);
  } catch (const prolfa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
