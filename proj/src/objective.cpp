#include "prolfa/objective.hpp"

#include <algorithm>
#include <string>

namespace prolfa {

double exclusivity_penalty(const Matrix& selection) {
  if (!selection.allFinite()) throw Error("exclusivity_penalty: non-finite input");
  const double row_l1_sq = selection.cwiseAbs().rowwise().sum().squaredNorm();
  return std::max(0.0, row_l1_sq - selection.squaredNorm());
}

double objective(const Matrix& selection, const Matrix& projection, const BundledKernel& kernel,
                 const Matrix& responses, double lambda1, double lambda2) {
  if (kernel.rows.cols() != selection.rows())
    throw Error("objective: kernel columns " + std::to_string(kernel.rows.cols()) +
                " != selection rows " + std::to_string(selection.rows()));
  if (selection.cols() != projection.rows())
    throw Error("objective: selection columns " + std::to_string(selection.cols()) +
                " != projection rows " + std::to_string(projection.rows()));
  if (responses.rows() != kernel.rows.rows() || responses.cols() != projection.cols())
    throw Error("objective: responses are " + std::to_string(responses.rows()) + "x" +
                std::to_string(responses.cols()) + ", expected " +
                std::to_string(kernel.rows.rows()) + "x" + std::to_string(projection.cols()));

  const Matrix pooled = kernel.rows * selection;  // per-sample representations
  const double forward = (pooled * projection - responses).squaredNorm();
  const double reverse = (pooled - responses * projection.transpose()).squaredNorm();
  return forward + reverse + lambda1 * exclusivity_penalty(selection) +
         lambda2 * projection.squaredNorm();
}

}  // namespace prolfa
