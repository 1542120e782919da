#ifndef MOST_DESCENT_HPP_
#define MOST_DESCENT_HPP_

#include <vector>

#include "most/types.hpp"

namespace most {

struct MinNormConfig {
  int max_iters = 2000;
  double gap_tol = 1e-8;
  // Gamma entries at or below this are excluded from the min-norm problem;
  // otherwise the zero vector lies in the hull and the direction collapses.
  double support_eps = 1e-12;
  // Entries below this fraction of the column maximum are excluded too: the
  // min-norm point is capped by its smallest member, so solver dust with
  // near-zero mass would freeze the whole solution.
  double support_rel = 0.01;

  void validate() const;
};

struct MinNormResult {
  Vector weights;       // lambda on the simplex over the given vectors
  double sq_norm = 0.0; // ||sum_i lambda_i g_i||^2
  double gap = 0.0;     // final Frank-Wolfe duality gap
  bool converged = false;
};

/// min_{lambda in simplex} ||sum_i lambda_i g_i||^2 by Frank-Wolfe with the
/// exact two-point line search gamma = clip((v - s).v / ||v - s||^2, 0, 1),
/// plus away steps so boundary optima converge linearly instead of
/// zigzagging.
MinNormResult min_norm_weights(const std::vector<Vector>& gradients,
                               const MinNormConfig& cfg = {});

struct DescentResult {
  Vector direction;            // d, length param_dim
  Vector dual_weights;         // lambda over the support (empty if no support)
  std::vector<int> support;    // objectives with Gamma_ij > support_eps
  double sq_norm = 0.0;        // ||d||^2
  bool empty_support = false;
  // max_i of Gamma_ij grad_i . d + 0.5 ||d||^2 over the support; a valid
  // common-descent direction keeps this at roughly the duality-gap level.
  double max_contract_violation = 0.0;
};

/// d = -sum_{i in support} lambda*_i Gamma_ij grad L_i(theta), the common
/// descent direction for the Gamma-reweighted objectives of one solution.
DescentResult descent_direction(const Problem& problem, const Vector& theta,
                                const Vector& plan_column,
                                const MinNormConfig& cfg = {});

/// K successive descent steps theta <- theta + eta d under a fixed plan
/// column; returns the updated parameters and the last step's result, whose
/// contract-violation field covers all K steps.
std::pair<Vector, DescentResult> inner_descent(const Problem& problem,
                                               Vector theta,
                                               const Vector& plan_column,
                                               double eta, int steps,
                                               const MinNormConfig& cfg = {});

}  // namespace most

#endif  // MOST_DESCENT_HPP_
