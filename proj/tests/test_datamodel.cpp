#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "oracles.hpp"
#include "prolfa/io.hpp"

using namespace prolfa;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("prolfa_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

DescriptorDataset random_dataset(std::mt19937_64& rng, bool with_responses, bool with_mask) {
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> samples(1, 5);
  std::uniform_int_distribution<int> per_sample(1, 7);
  std::uniform_int_distribution<int> classes(1, 3);

  DescriptorDataset ds;
  const int m = samples(rng);
  Index n = 0;
  for (int i = 0; i < m; ++i) {
    const int sz = per_sample(rng);
    ds.partition.push_back(static_cast<std::uint32_t>(sz));
    n += sz;
  }
  ds.descriptors = oracles::random_matrix(dim(rng), n, rng);
  if (with_responses) ds.responses = oracles::random_matrix(m, classes(rng), rng);
  if (with_mask) {
    ds.label_mask.assign(static_cast<std::size_t>(m), 0);
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& v : ds.label_mask) v = static_cast<std::uint8_t>(bit(rng));
    ds.label_mask[0] = 1;
  }
  return ds;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("validate_dataset: consistent construction passes") {
  DescriptorDataset ds;
  ds.descriptors = Matrix::Ones(2, 5);
  ds.partition = {3, 2};
  CHECK(validate_dataset(ds).empty());
  CHECK_NOTHROW(require_valid(ds));
}

TEST_CASE("validate_dataset: every violation is enumerated") {
  DescriptorDataset ds;
  ds.descriptors = Matrix::Ones(2, 5);
  ds.partition = {3, 3};
  auto issues = validate_dataset(ds);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("sums to 6") != std::string::npos);
  CHECK(issues[0].find("5") != std::string::npos);

  ds.partition = {3, 2};
  ds.responses = Matrix::Zero(3, 2);
  issues = validate_dataset(ds);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("response rows 3 != m 2") != std::string::npos);

  ds.responses.resize(0, 0);
  ds.partition = {3, 0, 2};
  ds.descriptors(1, 2) = std::numeric_limits<double>::quiet_NaN();
  issues = validate_dataset(ds);
  CHECK(issues.size() == 2);  // empty sample + non-finite entry

  ds.descriptors(1, 2) = 0.0;
  ds.partition = {3, 2};
  ds.label_mask = {0, 0};
  issues = validate_dataset(ds);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("no sample") != std::string::npos);
}

TEST_CASE("group weights: fixed rows") {
  const GroupWeights g = build_group_weights({3, 2});
  const Matrix dense = g.dense();
  Matrix want(2, 5);
  want << 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0, 0, 0, 0, 0.5, 0.5;
  CHECK((dense - want).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK(build_group_weights({1}).dense()(0, 0) == 1.0);

  const Matrix three = build_group_weights({2, 2, 2}).dense();
  CHECK(three.rows() == 3);
  CHECK(three.cols() == 6);
  for (Index i = 0; i < 3; ++i) CHECK(three.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(build_group_weights({2, 0, 1}), Error);
}

TEST_CASE("group weights: row-stochastic with disjoint supports") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> samples(1, 6);
  std::uniform_int_distribution<int> per_sample(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint32_t> partition;
    const int m = samples(rng);
    for (int i = 0; i < m; ++i) partition.push_back(static_cast<std::uint32_t>(per_sample(rng)));
    const Matrix dense = build_group_weights(partition).dense();
    for (Index i = 0; i < dense.rows(); ++i) {
      CHECK(std::abs(dense.row(i).sum() - 1.0) <= 1e-12);
      for (Index k = 0; k < dense.rows(); ++k) {
        if (i == k) continue;
        CHECK((dense.row(i).array() * dense.row(k).array()).abs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("dataset file: write-read identity, bitwise, 100 random cases") {
  TempDir tmp;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const DescriptorDataset ds = random_dataset(rng, coin(rng) == 1, coin(rng) == 1);
    const std::string path = tmp.file("ds.bin");
    write_descriptor_file(ds, path);
    const DescriptorDataset back = read_descriptor_file(path);
    CHECK(bitwise_equal(ds.descriptors, back.descriptors));
    CHECK(ds.partition == back.partition);
    CHECK(bitwise_equal(ds.responses, back.responses));
    CHECK(ds.label_mask == back.label_mask);
    CHECK(ds.metadata == back.metadata);
  }
}

TEST_CASE("dataset file: metadata block round-trips") {
  TempDir tmp;
  std::mt19937_64 rng(6);
  DescriptorDataset ds = random_dataset(rng, true, false);
  ds.metadata = "command=synth\nseed=42\n";
  const std::string path = tmp.file("meta.bin");
  write_descriptor_file(ds, path);
  CHECK(read_descriptor_file(path).metadata == ds.metadata);
}

TEST_CASE("dataset file: bad magic, version, truncation, overflow") {
  TempDir tmp;
  std::mt19937_64 rng(9);
  const DescriptorDataset ds = random_dataset(rng, false, false);
  const std::string path = tmp.file("ds.bin");
  write_descriptor_file(ds, path);

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_WITH_AS(read_descriptor_file(path), doctest::Contains("bad magic"), Error);

  write_descriptor_file(ds, path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    const char v2[2] = {2, 0};
    f.write(v2, 2);
  }
  CHECK_THROWS_WITH_AS(read_descriptor_file(path), doctest::Contains("version"), Error);

  write_descriptor_file(ds, path);
  fs::resize_file(path, fs::file_size(path) - 9);
  CHECK_THROWS_WITH_AS(read_descriptor_file(path), doctest::Contains("truncated"), Error);

  // header claiming absurd dimensions trips the overflow guard
  write_descriptor_file(ds, path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(6);
    const unsigned char big[8] = {0xff, 0xff, 0xff, 0x7f, 0xff, 0xff, 0xff, 0x7f};
    f.write(reinterpret_cast<const char*>(big), 8);
  }
  CHECK_THROWS_WITH_AS(read_descriptor_file(path), doctest::Contains("dimension overflow"), Error);
}

TEST_CASE("model file: round trip is exact") {
  TempDir tmp;
  std::mt19937_64 rng(15);
  PrototypeModel model;
  model.prototype_book = oracles::random_matrix(4, 3, rng);
  model.projection = oracles::random_matrix(3, 2, rng);
  model.hyper.lambda1 = 0.25;
  model.hyper.lambda2 = 0.5;
  model.hyper.prototypes = 3;
  model.hyper.seed = 99;
  model.descriptor_dim = 4;
  model.descriptor_count = 7;
  model.sample_count = 2;
  model.response_dim = 2;
  model.selection = oracles::random_nonneg_matrix(7, 3, rng);
  model.selection_peak = {1, 4, 0};
  model.metadata = "command=train\n";

  const std::string path = tmp.file("model.bin");
  const Matrix x = oracles::random_matrix(4, 7, rng);
  model.prototype_book = x * model.selection;  // keep the save-time invariant
  save_model(model, path, &x);
  const PrototypeModel back = load_model(path);
  CHECK(bitwise_equal(model.prototype_book, back.prototype_book));
  CHECK(bitwise_equal(model.projection, back.projection));
  CHECK(bitwise_equal(model.selection, back.selection));
  CHECK(model.selection_peak == back.selection_peak);
  CHECK(back.hyper.lambda1 == model.hyper.lambda1);
  CHECK(back.hyper.lambda2 == model.hyper.lambda2);
  CHECK(back.hyper.prototypes == 3);
  CHECK(back.hyper.seed == 99);
  CHECK(back.descriptor_count == 7);
  CHECK(back.sample_count == 2);
  CHECK(back.metadata == model.metadata);
}

TEST_CASE("model file: wrong version and inconsistent book are refused") {
  TempDir tmp;
  std::mt19937_64 rng(21);
  PrototypeModel model;
  const Matrix x = oracles::random_matrix(3, 6, rng);
  model.selection = oracles::random_nonneg_matrix(6, 2, rng);
  model.prototype_book = x * model.selection;
  model.projection = oracles::random_matrix(2, 2, rng);
  model.hyper.prototypes = 2;
  model.descriptor_dim = 3;
  model.descriptor_count = 6;
  model.sample_count = 3;
  model.response_dim = 2;

  const std::string path = tmp.file("model.bin");
  save_model(model, path, &x);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    const char v9[2] = {9, 0};
    f.write(v9, 2);
  }
  CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("version"), Error);

  model.prototype_book(0, 0) += 1.0;  // now P != X * selection
  CHECK_THROWS_WITH_AS(save_model(model, path, &x), doctest::Contains("refusing to save"), Error);
  CHECK_NOTHROW(save_model(model, path));  // without descriptors there is nothing to check
}

TEST_CASE("selection matrix invariant: simplex columns within 1e-6") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix z = oracles::random_nonneg_matrix(8, 3, rng);
    for (Index j = 0; j < z.cols(); ++j) z.col(j) /= z.col(j).sum();
    for (Index j = 0; j < z.cols(); ++j) {
      CHECK(std::abs(z.col(j).sum() - 1.0) <= 1e-6);
      CHECK(z.col(j).minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("csv import: grouping, dimensions, errors") {
  TempDir tmp;
  const std::string path = tmp.file("descriptors.csv");
  {
    std::ofstream f(path);
    f << "# comment line\n";
    f << "a,1.0,2.0\n";
    f << "a,3.0,4.0\n";
    f << "b,5.0,6.0\n";
  }
  const DescriptorDataset ds = read_descriptor_csv(path);
  CHECK(ds.dim() == 2);
  CHECK(ds.descriptor_count() == 3);
  REQUIRE(ds.partition.size() == 2);
  CHECK(ds.partition[0] == 2);
  CHECK(ds.partition[1] == 1);
  CHECK(ds.descriptors(0, 2) == 5.0);
  CHECK(ds.descriptors(1, 1) == 4.0);

  {
    std::ofstream f(path);
    f << "a,1.0\nb,2.0\na,3.0\n";
  }
  CHECK_THROWS_WITH_AS(read_descriptor_csv(path), doctest::Contains("consecutive"), Error);

  {
    std::ofstream f(path);
    f << "a,1.0,2.0\na,3.0\n";
  }
  CHECK_THROWS_WITH_AS(read_descriptor_csv(path), doctest::Contains("coordinates"), Error);

  {
    std::ofstream f(path);
    f << "a,1.0,oops\n";
  }
  CHECK_THROWS_WITH_AS(read_descriptor_csv(path), doctest::Contains("cannot parse"), Error);
}

TEST_CASE("hyperparameter validation") {
  Hyperparameters h;
  CHECK(validate_hyperparameters(h, 100).empty());
  h.prototypes = 101;
  CHECK(validate_hyperparameters(h, 100).size() == 1);
  h.prototypes = 0;
  h.mu = 0.0;
  h.tol_admm = 0.0;
  const auto issues = validate_hyperparameters(h, 100);
  CHECK(issues.size() == 3);
}
