#include "most/core.hpp"

#include <cmath>

namespace most {

Marginal make_uniform_marginal(Eigen::Index dim) {
  return Marginal::uniform(dim);
}

FeasibilityReport validate_plan(const TransportPlan& plan, const Marginal& alpha,
                                const Marginal& beta, double tol) {
  if (plan.rows() != alpha.dim() || plan.cols() != beta.dim()) {
    throw std::invalid_argument("validate_plan: plan shape does not match marginals");
  }
  FeasibilityReport report;
  report.max_row_deviation =
      (plan.row_marginal() - alpha.weights()).cwiseAbs().maxCoeff();
  report.max_col_deviation =
      (plan.col_marginal() - beta.weights()).cwiseAbs().maxCoeff();
  report.min_entry = plan.entries().minCoeff();
  report.feasible = report.max_row_deviation <= tol &&
                    report.max_col_deviation <= tol &&
                    report.min_entry >= -tol;
  return report;
}

double plan_regularizer(const TransportPlan& plan) {
  return -plan.entries().rowwise().maxCoeff().sum();
}

double plan_diversity(const TransportPlan& plan, bool* degenerate) {
  const Matrix& g = plan.entries();
  const Eigen::Index m = g.cols();
  if (degenerate) *degenerate = false;
  if (m < 2) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  Vector norms(m);
  for (Eigen::Index j = 0; j < m; ++j) norms[j] = g.col(j).norm();
  double total = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index z = 0; z < m; ++z) {
      if (z == j) continue;
      if (norms[j] == 0.0 || norms[z] == 0.0) continue;
      total += g.col(j).dot(g.col(z)) / (norms[j] * norms[z]);
    }
  }
  return total;
}

}  // namespace most
