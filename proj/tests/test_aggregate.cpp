#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "prolfa/aggregate.hpp"
#include "prolfa/harness/synthetic.hpp"
#include "prolfa/solver.hpp"

using namespace prolfa;

namespace {

PrototypeModel model_from(const DescriptorDataset& ds, const Matrix& selection,
                          const Matrix& projection) {
  PrototypeModel model;
  model.prototype_book = ds.descriptors * selection;
  model.projection = projection;
  model.selection = selection;
  model.hyper.prototypes = static_cast<std::uint32_t>(selection.cols());
  model.descriptor_dim = static_cast<std::uint32_t>(ds.dim());
  model.descriptor_count = static_cast<std::uint32_t>(ds.descriptor_count());
  model.sample_count = static_cast<std::uint32_t>(ds.sample_count());
  model.response_dim = static_cast<std::uint32_t>(projection.cols());
  return model;
}

}  // namespace

TEST_CASE("aggregate_training: identity descriptors with one-hot selection pick rows") {
  DescriptorDataset ds;
  ds.descriptors = Matrix::Identity(4, 4);
  ds.partition = {1, 1, 1, 1};
  Matrix selection = Matrix::Zero(4, 2);
  selection(1, 0) = 1.0;
  selection(3, 1) = 1.0;
  const auto reps = aggregate_training(ds, selection);
  REQUIRE(reps.size() == 4);
  for (Index i = 0; i < 4; ++i) {
    CHECK(reps[static_cast<std::size_t>(i)].values[0] == doctest::Approx(i == 1 ? 1.0 : 0.0));
    CHECK(reps[static_cast<std::size_t>(i)].values[1] == doctest::Approx(i == 3 ? 1.0 : 0.0));
    CHECK(reps[static_cast<std::size_t>(i)].sample_id == i);
  }
}

TEST_CASE("aggregate_training: agrees with aggregate_new through the prototype book") {
  std::mt19937_64 rng(91);
  SyntheticSpec spec;
  spec.n_points = 40;
  spec.n_samples = 4;
  spec.points_per_sample = 10;
  spec.seed = 3;
  const DescriptorDataset ds = generate_synthetic(spec);
  const Matrix selection = oracles::random_nonneg_matrix(40, 3, rng);
  const PrototypeModel model = model_from(ds, selection, oracles::random_matrix(3, 2, rng));

  const auto training = aggregate_training(ds, model);
  for (Index i = 0; i < ds.sample_count(); ++i) {
    const auto fresh = aggregate_new(ds.sample_block(i), model);
    CHECK((training[static_cast<std::size_t>(i)].values - fresh.values).cwiseAbs().maxCoeff() <=
          1e-10);
  }
}

TEST_CASE("aggregate_new: identity book and cancelling descriptors") {
  DescriptorDataset ds;
  ds.descriptors = Matrix::Identity(3, 3);
  ds.partition = {1, 1, 1};
  const PrototypeModel model =
      model_from(ds, Matrix::Identity(3, 3), Matrix::Zero(3, 1));

  Vector x(3);
  x << 0.2, -0.4, 0.9;
  const auto rep = aggregate_new(x, model);
  CHECK((rep.values - x).cwiseAbs().maxCoeff() <= 1e-15);

  Matrix pair(3, 2);
  pair.col(0) = x;
  pair.col(1) = -x;
  CHECK(aggregate_new(pair, model).values.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("aggregate_new: equals the full-product route") {
  std::mt19937_64 rng(97);
  SyntheticSpec spec;
  spec.n_points = 30;
  spec.n_samples = 3;
  spec.points_per_sample = 10;
  spec.dim = 4;
  spec.seed = 5;
  const DescriptorDataset ds = generate_synthetic(spec);
  const Matrix selection = oracles::random_nonneg_matrix(30, 2, rng);
  const PrototypeModel model = model_from(ds, selection, oracles::random_matrix(2, 2, rng));

  const Matrix x_new = oracles::random_matrix(4, 7, rng);
  const auto rep = aggregate_new(x_new, model);

  // brute force: uniform weight row times X_new' X Z
  const RowVector g = RowVector::Constant(7, 1.0 / 7.0);
  const RowVector want = g * x_new.transpose() * ds.descriptors * selection;
  CHECK((rep.values.transpose() - want).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("aggregate_new: errors") {
  DescriptorDataset ds;
  ds.descriptors = Matrix::Identity(3, 3);
  ds.partition = {1, 1, 1};
  const PrototypeModel model = model_from(ds, Matrix::Identity(3, 3), Matrix::Zero(3, 1));
  CHECK_THROWS_WITH_AS(aggregate_new(Matrix::Zero(2, 1), model), doctest::Contains("dimension"),
                       Error);
  CHECK_THROWS_WITH_AS(aggregate_new(Matrix(3, 0), model), doctest::Contains("no descriptors"),
                       Error);
}

TEST_CASE("aggregate_unlabeled: mask selection") {
  SyntheticSpec spec;
  spec.n_points = 50;
  spec.n_samples = 5;
  spec.points_per_sample = 10;
  spec.seed = 7;
  DescriptorDataset ds = generate_synthetic(spec);
  std::mt19937_64 rng(101);
  const PrototypeModel model = model_from(ds, oracles::random_nonneg_matrix(50, 2, rng),
                                          oracles::random_matrix(2, 2, rng));

  ds.label_mask = {0, 0, 0, 0, 0};
  CHECK(aggregate_unlabeled(ds, model).size() == 5);

  ds.label_mask = {1, 1, 1, 1, 1};
  CHECK(aggregate_unlabeled(ds, model).empty());

  ds.label_mask = {1, 0, 0, 1, 0};
  const auto reps = aggregate_unlabeled(ds, model);
  REQUIRE(reps.size() == 3);
  CHECK(reps[0].sample_id == 1);
  CHECK(reps[1].sample_id == 2);
  CHECK(reps[2].sample_id == 4);
  for (const auto& rep : reps) CHECK(rep.values.size() == 2);

  ds.label_mask.clear();
  CHECK_THROWS_AS(aggregate_unlabeled(ds, model), Error);
}

TEST_CASE("predict_responses: zero projection and selector rows") {
  DescriptorDataset ds;
  ds.descriptors = Matrix::Identity(3, 3);
  ds.partition = {1, 1, 1};
  std::mt19937_64 rng(103);
  const Matrix w = oracles::random_matrix(3, 2, rng);
  PrototypeModel model = model_from(ds, Matrix::Identity(3, 3), w);

  std::vector<AggregatedRepresentation> reps(2);
  reps[0].values = Vector::Unit(3, 1);
  reps[1].values = Vector::Unit(3, 2);
  const Matrix pred = predict_responses(reps, model);
  CHECK((pred.row(0) - w.row(1)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((pred.row(1) - w.row(2)).cwiseAbs().maxCoeff() <= 1e-15);

  model.projection = Matrix::Zero(3, 2);
  CHECK(predict_responses(reps, model).cwiseAbs().maxCoeff() == 0.0);

  reps[0].values = Vector::Zero(2);
  CHECK_THROWS_AS(predict_responses(reps, model), Error);
}

TEST_CASE("aggregate_new: linearity and permutation invariance") {
  std::mt19937_64 rng(107);
  DescriptorDataset ds;
  ds.descriptors = oracles::random_matrix(3, 12, rng);
  ds.partition = {12};
  const PrototypeModel model = model_from(ds, oracles::random_nonneg_matrix(12, 2, rng),
                                          oracles::random_matrix(2, 2, rng));

  const Matrix x_new = oracles::random_matrix(3, 5, rng);
  const auto base = aggregate_new(x_new, model);

  // scaling every descriptor scales the representation
  const auto scaled = aggregate_new(Matrix(2.5 * x_new), model);
  CHECK((scaled.values - 2.5 * base.values).cwiseAbs().maxCoeff() <= 1e-12);

  // permuting descriptor columns leaves the mean pooling unchanged
  Matrix shuffled = x_new;
  std::vector<Index> perm = {4, 2, 0, 3, 1};
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled.col(static_cast<Index>(i)) = x_new.col(perm[i]);
  const auto permuted = aggregate_new(shuffled, model);
  CHECK((permuted.values - base.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("prototype-book equivalence guards the caching factorization") {
  std::mt19937_64 rng(109);
  SyntheticSpec spec;
  spec.n_points = 60;
  spec.n_samples = 6;
  spec.points_per_sample = 10;
  spec.dim = 3;
  spec.seed = 11;
  const DescriptorDataset ds = generate_synthetic(spec);
  const Matrix selection = oracles::random_nonneg_matrix(60, 4, rng);
  const Matrix book = ds.descriptors * selection;
  const GroupWeights g = build_group_weights(ds.partition);
  const Matrix dense_g = g.dense();
  for (Index i = 0; i < ds.sample_count(); ++i) {
    const RowVector via_book = dense_g.row(i) * ds.descriptors.transpose() * book;
    const RowVector via_kernel =
        (dense_g.row(i) * ds.descriptors.transpose() * ds.descriptors) * selection;
    CHECK((via_book - via_kernel).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("normalization flag") {
  std::mt19937_64 rng(113);
  DescriptorDataset ds;
  ds.descriptors = oracles::random_matrix(3, 8, rng);
  ds.partition = {4, 4};
  const PrototypeModel model = model_from(ds, oracles::random_nonneg_matrix(8, 2, rng),
                                          oracles::random_matrix(2, 2, rng));
  const auto reps = aggregate_training(ds, model, true);
  for (const auto& rep : reps) {
    CHECK(rep.normalized);
    CHECK(std::abs(rep.values.norm() - 1.0) <= 1e-9);
  }

  // zero representation stays zero with the flag recorded
  PrototypeModel zero_model = model;
  zero_model.prototype_book.setZero();
  const auto rep = aggregate_new(Matrix(oracles::random_matrix(3, 2, rng)), zero_model, true);
  CHECK(rep.normalized);
  CHECK(rep.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trained model end-to-end: predictions track 1-NN labels") {
  SyntheticSpec spec;
  spec.seed = 21;
  const DescriptorDataset ds = generate_synthetic(spec);
  Hyperparameters h;
  h.prototypes = 2;
  const TrainResult result = train(ds, h);
  const auto reps = aggregate_training(ds, result.model);
  const Matrix pred = predict_responses(reps, result.model);
  int agree = 0;
  for (Index i = 0; i < pred.rows(); ++i) {
    Index arg = 0;
    for (Index j = 1; j < pred.cols(); ++j)
      if (pred(i, j) > pred(i, arg)) arg = j;
    Index truth = 0;
    for (Index j = 1; j < ds.responses.cols(); ++j)
      if (ds.responses(i, j) > ds.responses(i, truth)) truth = j;
    if (arg == truth) ++agree;
  }
  CHECK(agree >= (9 * pred.rows()) / 10);
}
