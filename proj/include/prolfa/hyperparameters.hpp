#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prolfa {

struct Hyperparameters {
  double lambda1 = 0.1;          // exclusivity weight
  double lambda2 = 0.1;          // projection ridge
  double mu = 1.0;               // consensus penalty (fixed, no schedule)
  std::uint32_t prototypes = 2;  // columns of the selection matrix
  double eps_reweight = 0.1;     // denominator guard in the reweight diagonal
  double tol_inner_row = 1e-6;
  double tol_admm = 1e-4;
  double tol_outer = 0.1;
  std::uint32_t max_inner_row = 50;
  std::uint32_t max_admm = 200;
  std::uint32_t max_outer = 50;
  std::uint32_t seed = 0;
};

// One message per violation; pass n_descriptors < 0 when N is not yet known.
std::vector<std::string> validate_hyperparameters(const Hyperparameters& h,
                                                  long long n_descriptors = -1);

}  // namespace prolfa
