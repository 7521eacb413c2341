// Integration tests driving the command-line binary (path in PROLFA_CLI).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "prolfa/io.hpp"

using namespace prolfa;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("PROLFA_CLI");
  REQUIRE_MESSAGE(env != nullptr, "PROLFA_CLI must point at the binary");
  return env;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("prolfa_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

// CSV rows with '#' comments stripped
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("synth: writes the default dataset deterministically") {
  TempDir tmp;
  const std::string a = tmp.file("a.plfa");
  const std::string b = tmp.file("b.plfa");
  REQUIRE(run("synth --output " + a + " --seed 7") == 0);
  REQUIRE(run("synth --output " + b + " --seed 7") == 0);
  CHECK(slurp(a) == slurp(b));

  const DescriptorDataset ds = read_descriptor_file(a);
  CHECK(ds.descriptor_count() == 200);
  CHECK(ds.sample_count() == 10);
  CHECK(ds.metadata.find("command=synth") != std::string::npos);
  CHECK(ds.metadata.find("tool=prolfa") != std::string::npos);

  const std::string c = tmp.file("c.plfa");
  CHECK(run("synth --output " + c + " --seed 8") == 0);
  CHECK(slurp(a) != slurp(c));

  // inconsistent spec is a config error
  CHECK(run("synth --output " + tmp.file("bad.plfa") +
            " --n-samples 3 --points-per-sample 20 --n-points 200") == 3);
}

TEST_CASE("train: model + monotone trace, reruns reproduce the model bitwise") {
  TempDir tmp;
  const std::string ds = tmp.file("ds.plfa");
  REQUIRE(run("synth --output " + ds) == 0);

  const std::string model = tmp.file("model.plfm");
  const std::string trace = tmp.file("trace.csv");
  REQUIRE(run("train --input " + ds + " --output " + model + " --trace " + trace) == 0);

  const PrototypeModel m = load_model(model);
  CHECK(m.descriptor_count == 200);
  CHECK(m.hyper.prototypes == 2);
  CHECK(m.has_selection());
  CHECK(m.metadata.find("command=train") != std::string::npos);

  const auto rows = read_csv(trace);
  REQUIRE(rows.size() >= 3);  // header + init + iterations
  CHECK(rows[0][0] == "iteration");
  double prev = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double objective = std::stod(rows[i][1]);
    CHECK(objective <= prev * (1.0 + 1e-6));
    prev = objective;
  }

  // rerun: model bytes identical, trace identical except the seconds column
  const std::string model2 = tmp.file("model2.plfm");
  const std::string trace2 = tmp.file("trace2.csv");
  REQUIRE(run("train --input " + ds + " --output " + model2 + " --trace " + trace2) == 0);
  const std::string repl1 = slurp(model);
  std::string repl2 = slurp(model2);
  // the embedded config echoes the output paths; normalize them before diffing
  size_t pos;
  while ((pos = repl2.find("model2.plfm")) != std::string::npos) repl2.replace(pos, 11, "model.plfm");
  while ((pos = repl2.find("trace2.csv")) != std::string::npos) repl2.replace(pos, 10, "trace.csv");
  CHECK(repl1 == repl2);

  const auto rows2 = read_csv(trace2);
  REQUIRE(rows.size() == rows2.size());
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (std::size_t c = 0; c + 1 < rows[i].size(); ++c)  // all but the seconds column
      CHECK(rows[i][c] == rows2[i][c]);

  // --semi without a mask is an error
  CHECK(run("train --input " + ds + " --output " + tmp.file("x.plfm") + " --semi") == 4);
}

TEST_CASE("train: exit code 2 when the outer cap is hit") {
  TempDir tmp;
  const std::string ds = tmp.file("ds.plfa");
  REQUIRE(run("synth --output " + ds) == 0);
  const std::string model = tmp.file("model.plfm");
  CHECK(run("train --input " + ds + " --output " + model + " --max-outer 1 --tol-outer 1e-12") ==
        2);
}

TEST_CASE("aggregate: csv output, normalization, error listing") {
  TempDir tmp;
  const std::string ds = tmp.file("ds.plfa");
  const std::string model = tmp.file("model.plfm");
  REQUIRE(run("synth --output " + ds) == 0);
  REQUIRE(run("train --input " + ds + " --output " + model) == 0);

  const std::string reps = tmp.file("reps.csv");
  REQUIRE(run("aggregate --input " + ds + " --model " + model + " --output " + reps) == 0);
  const auto rows = read_csv(reps);
  REQUIRE(rows.size() == 11);  // header + 10 samples
  CHECK(rows[0][0] == "sample");
  CHECK(rows[0].size() == 3);

  const std::string normed = tmp.file("normed.csv");
  REQUIRE(run("aggregate --input " + ds + " --model " + model + " --output " + normed +
              " --normalize") == 0);
  for (const auto& row : read_csv(normed)) {
    if (row[0] == "sample") continue;
    const double x = std::stod(row[1]);
    const double y = std::stod(row[2]);
    CHECK(std::abs(std::hypot(x, y) - 1.0) <= 1e-9);
  }

  // binary representation container round-trips through the dataset reader
  const std::string bin = tmp.file("reps.plfa");
  REQUIRE(run("aggregate --input " + ds + " --model " + model + " --output " + bin +
              " --format binary") == 0);
  const DescriptorDataset packed = read_descriptor_file(bin);
  CHECK(packed.descriptor_count() == 10);
  CHECK(packed.dim() == 2);

  // a dataset with an empty sample fails validation with a per-sample message
  DescriptorDataset broken = read_descriptor_file(ds);
  broken.partition[3] = 0;
  broken.partition[4] += 20;
  const std::string broken_path = tmp.file("broken.plfa");
  write_descriptor_file(broken, broken_path);
  CHECK(run("aggregate --input " + broken_path + " --model " + model + " --output " +
            tmp.file("nope.csv")) == 4);
}

TEST_CASE("eval: end-to-end synthetic accuracy and flag validation") {
  TempDir tmp;
  const std::string ds = tmp.file("ds.plfa");
  REQUIRE(run("synth --output " + ds) == 0);
  const std::string report = tmp.file("report.txt");
  REQUIRE(run("eval --input " + ds + " --output " + report + " --repetitions 6") == 0);

  double mean = -1.0;
  {
    std::ifstream in(report);
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("mean=", 0) == 0) mean = std::stod(line.substr(5));
  }
  CHECK(mean >= 0.95);

  CHECK(run("eval --input " + ds + " --output " + tmp.file("m.txt") +
            " --metric minkowski --p 3 --repetitions 2") == 0);
  CHECK(run("eval --input " + ds + " --output " + tmp.file("k0.txt") + " --k 0") == 3);

  // same seed twice: identical report text
  const std::string r1 = tmp.file("r1.txt");
  const std::string r2 = tmp.file("r2.txt");
  REQUIRE(run("eval --input " + ds + " --output " + r1 + " --repetitions 2 --seed 5") == 0);
  REQUIRE(run("eval --input " + ds + " --output " + r2 + " --repetitions 2 --seed 5") == 0);
  auto strip_volatile = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
      if (line.rfind("seconds=", 0) == 0) continue;
      if (line.find("output=") != std::string::npos) continue;
      out += line + "\n";
    }
    return out;
  };
  CHECK(strip_volatile(slurp(r1)) == strip_volatile(slurp(r2)));
}

TEST_CASE("sweep and bench: series CSVs with headers") {
  TempDir tmp;
  const std::string ds = tmp.file("ds.plfa");
  REQUIRE(run("synth --output " + ds) == 0);

  const std::string series = tmp.file("series.csv");
  REQUIRE(run("sweep --input " + ds + " --output " + series +
              " --grid d_bar=2,4,8 --repetitions 2 --max-outer 6") == 0);
  const auto rows = read_csv(series);
  REQUIRE(rows.size() == 4);  // header + 3 grid points
  CHECK(rows[0][0] == "parameter");
  CHECK(rows[1][1] == "2");
  CHECK(rows[3][1] == "8");

  CHECK(run("sweep --input " + ds + " --output " + tmp.file("bad.csv") + " --grid d_bar=2,x") ==
        4);
  CHECK(run("sweep --input " + ds + " --output " + tmp.file("bad2.csv") + " --grid nope") == 4);

  const std::string bench = tmp.file("bench.csv");
  REQUIRE(run("bench --output " + bench +
              " --bench-N 100,200 --dim 4 --bench-samples 10 --prototypes 4"
              " --max-outer 2 --tol-outer 1e-12 --max-admm 25") == 0);
  const auto bench_rows = read_csv(bench);
  REQUIRE(bench_rows.size() == 3);
  CHECK(bench_rows[0][0] == "n_descriptors");
  CHECK(bench_rows[1][0] == "100");
  CHECK(bench_rows[2][0] == "200");
  bool has_fit = false;
  std::ifstream in(bench);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# fit_r2=", 0) == 0) has_fit = true;
  CHECK(has_fit);
}

TEST_CASE("config file: flags override file values") {
  TempDir tmp;
  const std::string cfg = tmp.file("cfg.ini");
  {
    std::ofstream f(cfg);
    f << "output=" << tmp.file("from_config.plfa") << "\n";
    f << "seed=3\n";
    f << "n-points=100\n";
    f << "n-samples=5\n";
    f << "points-per-sample=20\n";
  }
  REQUIRE(run("synth --config " + cfg) == 0);
  const DescriptorDataset a = read_descriptor_file(tmp.file("from_config.plfa"));
  CHECK(a.descriptor_count() == 100);
  CHECK(a.sample_count() == 5);

  // command line wins over the file
  REQUIRE(run("synth --config " + cfg + " --output " + tmp.file("override.plfa") +
              " --n-samples 10 --points-per-sample 10") == 0);
  const DescriptorDataset b = read_descriptor_file(tmp.file("override.plfa"));
  CHECK(b.sample_count() == 10);
}

TEST_CASE("csv import path: aggregate accepts models trained elsewhere") {
  TempDir tmp;
  // tiny csv dataset: two samples in 2-D
  const std::string csv = tmp.file("mini.csv");
  {
    std::ofstream f(csv);
    f << "s1,0.0,0.1\ns1,0.2,0.0\ns2,1.0,1.1\ns2,0.9,1.0\n";
  }
  const DescriptorDataset ds = read_descriptor_csv(csv);
  CHECK(ds.sample_count() == 2);
  CHECK(ds.descriptor_count() == 4);
}
