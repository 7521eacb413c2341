#include "prolfa/solver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>

#include "prolfa/parallel.hpp"
#include "prolfa/simplex.hpp"
#include "prolfa/spectral.hpp"
#include "prolfa/sylvester.hpp"

namespace prolfa {

Vector reweight_diagonal(const RowVector& row, double eps) {
  if (!(eps > 0)) throw Error("reweight_diagonal: eps must be positive");
  const double l1 = row.cwiseAbs().sum();
  Vector diag(row.size());
  for (Index k = 0; k < row.size(); ++k) diag[k] = l1 / (std::abs(row[k]) + eps) - 1.0;
  return diag;
}

RowVector selection_row_step(const RowVector& consensus_row, const RowVector& multiplier_row,
                             const Vector& diag, const RowVector& row, double mu, double lambda1,
                             double eps, bool* clamped) {
  if (consensus_row.size() != multiplier_row.size() || consensus_row.size() != diag.size() ||
      consensus_row.size() != row.size())
    throw Error("selection_row_step: size mismatch");
  RowVector out(consensus_row.size());
  const double l1 = row.cwiseAbs().sum();
  bool fired = false;
  for (Index k = 0; k < consensus_row.size(); ++k) {
    double denom = mu + 2.0 * lambda1 * diag[k];
    if (denom <= 1e-12) {
      // The eps deflation drove the surrogate curvature nonpositive; fall
      // back to the nonnegative majorizer weight so the step stays bounded.
      const double w = (l1 - std::abs(row[k])) / (std::abs(row[k]) + eps);
      denom = mu + 2.0 * lambda1 * std::max(w, 0.0);
      fired = true;
    }
    out[k] = (mu * consensus_row[k] - multiplier_row[k]) / denom;
  }
  if (clamped) *clamped = fired;
  return out;
}

RowSolveResult solve_selection_row(const RowVector& consensus_row, const RowVector& multiplier_row,
                                   double mu, double lambda1, double eps, double tol,
                                   int max_sweeps) {
  RowSolveResult res;
  RowVector row = consensus_row;
  for (int s = 0; s < max_sweeps; ++s) {
    const Vector diag = reweight_diagonal(row, eps);
    bool clamped = false;
    RowVector next =
        selection_row_step(consensus_row, multiplier_row, diag, row, mu, lambda1, eps, &clamped);
    res.clamped = res.clamped || clamped;
    const double delta = (next - row).cwiseAbs().maxCoeff();
    row = std::move(next);
    res.sweeps = s + 1;
    if (delta <= tol) {
      res.converged = true;
      break;
    }
  }
  res.row = std::move(row);
  return res;
}

Matrix consensus_gradient(const Matrix& consensus, const Matrix& selection,
                          const Matrix& multiplier, const Matrix& projection,
                          const BundledKernel& kernel, const Matrix& responses, double mu) {
  if (consensus.rows() != kernel.rows.cols() || consensus.rows() != selection.rows() ||
      consensus.cols() != selection.cols() || multiplier.rows() != consensus.rows() ||
      multiplier.cols() != consensus.cols() || projection.rows() != consensus.cols() ||
      responses.rows() != kernel.rows.rows() || responses.cols() != projection.cols())
    throw Error("consensus_gradient: shape mismatch");
  const Matrix pooled = kernel.rows * consensus;
  const Matrix pre = (pooled * projection - responses) * projection.transpose() + pooled -
                     responses * projection.transpose();
  return 2.0 * (kernel.rows.transpose() * pre) + mu * (consensus - selection) - multiplier;
}

double lipschitz_bound(const BundledKernel& kernel, const Matrix& projection, double mu) {
  const Matrix& k = kernel.rows;
  double kernel_gram = 0.0;
  if (k.size() > 0) {
    // K'K and KK' share their top eigenvalue; bound the smaller Gram matrix.
    kernel_gram = k.rows() <= k.cols() ? spectral_norm_upper_bound(Matrix(k * k.transpose()))
                                       : spectral_norm_upper_bound(Matrix(k.transpose() * k));
  }
  double projection_gram = 0.0;
  if (projection.size() > 0) {
    projection_gram = projection.rows() <= projection.cols()
                          ? spectral_norm_upper_bound(Matrix(projection * projection.transpose()))
                          : spectral_norm_upper_bound(Matrix(projection.transpose() * projection));
  }
  return 2.0 * kernel_gram * (1.0 + projection_gram) + mu;
}

Matrix consensus_step(const Matrix& consensus, const Matrix& selection, const Matrix& multiplier,
                      const Matrix& projection, const BundledKernel& kernel,
                      const Matrix& responses, double mu, double precomputed_bound, int threads) {
  const double bound =
      precomputed_bound > 0 ? precomputed_bound : lipschitz_bound(kernel, projection, mu);
  const Matrix grad =
      consensus_gradient(consensus, selection, multiplier, projection, kernel, responses, mu);
  return project_columns_to_simplex(Matrix(consensus - grad / bound), threads);
}

Matrix updated_multiplier(const Matrix& multiplier, const Matrix& selection,
                          const Matrix& consensus, double mu) {
  if (multiplier.rows() != selection.rows() || multiplier.cols() != selection.cols() ||
      selection.rows() != consensus.rows() || selection.cols() != consensus.cols())
    throw Error("updated_multiplier: shape mismatch");
  return multiplier + mu * (selection - consensus);
}

AdmmResult admm_solve(SolverState& state, const BundledKernel& kernel, const Matrix& responses,
                      int threads) {
  const Hyperparameters& h = state.hyper;
  state.multiplier = Matrix::Zero(state.selection.rows(), state.selection.cols());
  const double bound = lipschitz_bound(kernel, state.projection, h.mu);

  AdmmResult res;
  for (std::uint32_t t = 0; t < h.max_admm; ++t) {
    const Matrix prev_selection = state.selection;
    std::atomic<long> clamped_rows{0};
    std::atomic<long> capped_rows{0};
    Matrix& sel = state.selection;
    const Matrix& cons = state.consensus;
    const Matrix& mult = state.multiplier;
    parallel_for(sel.rows(), threads, [&](std::ptrdiff_t j) {
      const RowSolveResult r =
          solve_selection_row(cons.row(j), mult.row(j), h.mu, h.lambda1, h.eps_reweight,
                              h.tol_inner_row, static_cast<int>(h.max_inner_row));
      sel.row(j) = r.row;
      if (r.clamped) clamped_rows.fetch_add(1, std::memory_order_relaxed);
      if (!r.converged) capped_rows.fetch_add(1, std::memory_order_relaxed);
    });
    state.clamped_steps += clamped_rows.load();
    state.row_cap_hits += capped_rows.load();

    state.consensus = consensus_step(state.consensus, state.selection, state.multiplier,
                                     state.projection, kernel, responses, h.mu, bound, threads);
    state.multiplier = updated_multiplier(state.multiplier, state.selection, state.consensus, h.mu);

    const double gap = (state.selection - state.consensus).cwiseAbs().maxCoeff();
    const double delta = (state.selection - prev_selection).cwiseAbs().maxCoeff();
    state.admm_trace.push_back({static_cast<int>(state.admm_trace.size()), gap, delta});
    res.iterations = static_cast<int>(t) + 1;
    if (gap <= h.tol_admm && delta <= h.tol_admm) {
      res.converged = true;
      break;
    }
  }
  state.last_admm_converged = res.converged;
  return res;
}

Matrix solve_projection(const BundledKernel& kernel, const Matrix& consensus,
                        const Matrix& responses, double lambda2) {
  if (!(lambda2 > 0)) throw Error("solve_projection: lambda2 must be positive");
  if (kernel.rows.cols() != consensus.rows() || responses.rows() != kernel.rows.rows())
    throw Error("solve_projection: shape mismatch");
  const Matrix pooled = kernel.rows * consensus;
  const Index d_bar = pooled.cols();
  const Matrix a =
      pooled.transpose() * pooled + lambda2 * Matrix::Identity(d_bar, d_bar);
  const Matrix b = responses.transpose() * responses;
  const Matrix q = 2.0 * pooled.transpose() * responses;
  return solve_sylvester(a, b, q);
}

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream oss;
  for (std::size_t i = 0; i < issues.size(); ++i) oss << (i ? "; " : "") << issues[i];
  return oss.str();
}

TrainResult train_impl(const DescriptorDataset& ds, const Hyperparameters& hyper,
                       bool labeled_only, int threads) {
  require_valid(ds);
  const auto hyper_issues = validate_hyperparameters(hyper, ds.descriptor_count());
  if (!hyper_issues.empty()) throw Error("invalid hyperparameters: " + join_issues(hyper_issues));
  if (!(hyper.lambda2 > 0)) throw Error("training requires lambda2 > 0");
  if (!ds.has_responses()) throw Error("training requires responses");

  const GroupWeights weights = build_group_weights(ds.partition);
  const BundledKernel kernel = build_bundled_kernel(ds, weights, labeled_only);
  Matrix responses;
  if (labeled_only) {
    responses.resize(static_cast<Index>(kernel.sample_ids.size()), ds.response_dim());
    for (std::size_t r = 0; r < kernel.sample_ids.size(); ++r)
      responses.row(static_cast<Index>(r)) = ds.responses.row(kernel.sample_ids[r]);
  } else {
    responses = ds.responses;
  }

  SolverState state;
  state.hyper = hyper;
  const Index n = ds.descriptor_count();
  const Index d_bar = static_cast<Index>(hyper.prototypes);
  state.selection = Matrix::Constant(n, d_bar, 1.0 / static_cast<double>(n));
  state.consensus = state.selection;
  state.multiplier = Matrix::Zero(n, d_bar);
  state.projection = solve_projection(kernel, state.consensus, responses, hyper.lambda2);

  double current =
      objective(state.selection, state.projection, kernel, responses, hyper.lambda1, hyper.lambda2);
  state.objective_trace.emplace_back(0, current);
  state.outer_trace.push_back(
      {0, current, 0.0, exclusivity_penalty(state.selection), true, 0, 0.0});
  if (!std::isfinite(current))
    throw Error("objective is not finite at initialization; check descriptor and response scales");

  for (std::uint32_t k = 1; k <= hyper.max_outer; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const AdmmResult admm = admm_solve(state, kernel, responses, threads);
    state.projection = solve_projection(kernel, state.consensus, responses, hyper.lambda2);
    const double next = objective(state.selection, state.projection, kernel, responses,
                                  hyper.lambda1, hyper.lambda2);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double gap = (state.selection - state.consensus).cwiseAbs().maxCoeff();
    state.objective_trace.emplace_back(static_cast<int>(k), next);
    state.outer_trace.push_back({static_cast<int>(k), next, gap,
                                 exclusivity_penalty(state.selection), admm.converged,
                                 admm.iterations, seconds});
    if (!std::isfinite(next))
      throw Error("objective became non-finite at outer iteration " + std::to_string(k) +
                  "; aborting");
    const bool done = std::abs(current - next) < hyper.tol_outer;
    current = next;
    if (done) {
      state.outer_converged = true;
      break;
    }
  }

  TrainResult out;
  out.model.prototype_book = ds.descriptors * state.consensus;
  out.model.projection = state.projection;
  out.model.hyper = hyper;
  out.model.selection = state.consensus;
  out.model.selection_peak.resize(static_cast<std::size_t>(d_bar));
  for (Index j = 0; j < d_bar; ++j) {
    Index best = 0;
    for (Index i = 1; i < n; ++i)
      if (state.consensus(i, j) > state.consensus(best, j)) best = i;
    out.model.selection_peak[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(best);
  }
  out.model.descriptor_dim = static_cast<std::uint32_t>(ds.dim());
  out.model.descriptor_count = static_cast<std::uint32_t>(n);
  out.model.sample_count = static_cast<std::uint32_t>(ds.sample_count());
  out.model.response_dim = static_cast<std::uint32_t>(ds.response_dim());
  out.state = std::move(state);
  return out;
}

}  // namespace

TrainResult train(const DescriptorDataset& ds, const Hyperparameters& hyper, int threads) {
  return train_impl(ds, hyper, false, threads);
}

TrainResult train_semi(const DescriptorDataset& ds, const Hyperparameters& hyper, int threads) {
  if (!ds.has_label_mask()) throw Error("train_semi requires a label mask");
  return train_impl(ds, hyper, true, threads);
}

}  // namespace prolfa
