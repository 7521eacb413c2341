#pragma once

#include "prolfa/kernel.hpp"

namespace prolfa {

// Squared row-l1-norm sum minus squared Frobenius norm; zero exactly when the
// column supports are disjoint.
double exclusivity_penalty(const Matrix& selection);

// Full training objective: forward regression + reverse regression +
// lambda1 * exclusivity + lambda2 * ||projection||_F^2.
double objective(const Matrix& selection, const Matrix& projection, const BundledKernel& kernel,
                 const Matrix& responses, double lambda1, double lambda2);

}  // namespace prolfa
