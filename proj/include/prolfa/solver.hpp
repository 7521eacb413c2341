#pragma once

#include <utility>
#include <vector>

#include "prolfa/hyperparameters.hpp"
#include "prolfa/kernel.hpp"
#include "prolfa/model.hpp"
#include "prolfa/objective.hpp"

namespace prolfa {

// Diagonal of the reweight matrix for one selection row:
// value(k) = ||row||_1 / (|row(k)| + eps) - 1.
Vector reweight_diagonal(const RowVector& row, double eps);

// Closed-form row step: row(k) = (mu*c(k) - l(k)) / (mu + 2*lambda1*diag(k)).
// Nonpositive denominators fall back to the nonnegative majorizer weight
// (||row||_1 - |row(k)|)/(|row(k)| + eps), keeping the step bounded; `row`
// supplies that fallback and `clamped` is set when it fires.
RowVector selection_row_step(const RowVector& consensus_row, const RowVector& multiplier_row,
                             const Vector& diag, const RowVector& row, double mu, double lambda1,
                             double eps, bool* clamped = nullptr);

struct RowSolveResult {
  RowVector row;
  bool converged = false;
  bool clamped = false;
  int sweeps = 0;
};

// Iteratively reweighted row solve: alternate the diagonal rebuild with the
// closed-form step until the row stops moving in the max norm.
RowSolveResult solve_selection_row(const RowVector& consensus_row, const RowVector& multiplier_row,
                                   double mu, double lambda1, double eps, double tol,
                                   int max_sweeps);

// Gradient of the consensus subproblem's smooth objective at C.
Matrix consensus_gradient(const Matrix& consensus, const Matrix& selection,
                          const Matrix& multiplier, const Matrix& projection,
                          const BundledKernel& kernel, const Matrix& responses, double mu);

// Upper bound on the Lipschitz constant of that gradient:
// 2 * bound(K'K) * (1 + bound(W'W)) + mu.
double lipschitz_bound(const BundledKernel& kernel, const Matrix& projection, double mu);

// One projected gradient step with stepsize 1/L, columns projected back onto
// the simplex. Pass a precomputed bound to skip recomputing it.
Matrix consensus_step(const Matrix& consensus, const Matrix& selection, const Matrix& multiplier,
                      const Matrix& projection, const BundledKernel& kernel,
                      const Matrix& responses, double mu, double precomputed_bound = -1.0,
                      int threads = 1);

Matrix updated_multiplier(const Matrix& multiplier, const Matrix& selection,
                          const Matrix& consensus, double mu);

struct AdmmRecord {
  int iteration = 0;
  double consensus_gap = 0.0;    // ||Z - C||_inf
  double selection_delta = 0.0;  // ||Z - Z_prev||_inf
};

struct OuterRecord {
  int iteration = 0;
  double objective_value = 0.0;
  double consensus_gap = 0.0;
  double exclusivity = 0.0;
  bool admm_converged = true;
  int admm_iterations = 0;
  double seconds = 0.0;
};

struct SolverState {
  Matrix selection;   // Z, N x d_bar
  Matrix consensus;   // C, same shape, simplex columns
  Matrix multiplier;  // same shape, unconstrained
  Matrix projection;  // d_bar x c
  Hyperparameters hyper;
  std::vector<std::pair<int, double>> objective_trace;  // (outer iteration, objective)
  std::vector<AdmmRecord> admm_trace;
  std::vector<OuterRecord> outer_trace;
  bool outer_converged = false;
  bool last_admm_converged = false;
  long clamped_steps = 0;
  long row_cap_hits = 0;
};

struct AdmmResult {
  bool converged = false;
  int iterations = 0;
};

// Alternate {row solves, consensus step, multiplier step} until both the
// consensus gap and the selection delta drop below tol_admm, or the cap is
// reached (the caller proceeds with the last iterate either way). The
// multiplier restarts at zero.
AdmmResult admm_solve(SolverState& state, const BundledKernel& kernel, const Matrix& responses,
                      int threads = 1);

// Closed-form projection update: assemble the normal operators from the
// pooled representations and solve the resulting Sylvester system.
Matrix solve_projection(const BundledKernel& kernel, const Matrix& consensus,
                        const Matrix& responses, double lambda2);

struct TrainResult {
  PrototypeModel model;
  SolverState state;
};

// Block-coordinate training loop: selection/consensus block by ADMM, then the
// projection block in closed form, until the objective change drops below
// tol_outer. Supervised mode uses every sample; the semi-supervised variant
// restricts regression rows to mask-selected samples while selecting
// prototypes from all descriptors.
TrainResult train(const DescriptorDataset& ds, const Hyperparameters& hyper, int threads = 1);
TrainResult train_semi(const DescriptorDataset& ds, const Hyperparameters& hyper, int threads = 1);

}  // namespace prolfa
