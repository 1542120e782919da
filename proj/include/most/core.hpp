#ifndef MOST_CORE_HPP_
#define MOST_CORE_HPP_

#include "most/types.hpp"

namespace most {

/// Default tolerance for marginal feasibility checks, relative to mass 1.
inline constexpr double kFeasibilityTol = 1e-7;

struct FeasibilityReport {
  double max_row_deviation = 0.0;  // ||Gamma 1 - alpha||_inf
  double max_col_deviation = 0.0;  // ||Gamma^T 1 - beta||_inf
  double min_entry = 0.0;
  bool feasible = false;
};

Marginal make_uniform_marginal(Eigen::Index dim);

FeasibilityReport validate_plan(const TransportPlan& plan, const Marginal& alpha,
                                const Marginal& beta,
                                double tol = kFeasibilityTol);

/// R(Gamma) = -sum_i max_j Gamma_ij. Minimizing it concentrates each row's
/// mass on a single column.
double plan_regularizer(const TransportPlan& plan);

/// Sum of cosine similarities over ordered column pairs; smaller means the
/// solutions specialize on more disjoint objective subsets. Zero-norm
/// columns contribute nothing. With m < 2 returns 0 and sets *degenerate.
double plan_diversity(const TransportPlan& plan, bool* degenerate = nullptr);

}  // namespace most

#endif  // MOST_CORE_HPP_
