#ifndef MOST_TRANSPORT_HPP_
#define MOST_TRANSPORT_HPP_

#include <optional>
#include <vector>

#include "most/core.hpp"
#include "most/types.hpp"

namespace most {

/// Knobs of the proximal-point entropic OT scheme. Each proximal step runs
/// inner_iters Sinkhorn scalings against the kernel exp(-C/proximal_weight)
/// composed with the previous plan.
struct OtConfig {
  double proximal_weight = 0.1;
  int inner_iters = 5;
  int outer_iters = 500;
  double stop_tol = 1e-9;
  int regularizer_max_rounds = 10;

  void validate() const;
};

struct OtResult {
  TransportPlan plan;
  bool converged = false;
  int iters_used = 0;
  // Regularized objective after the initial solve and after each
  // majorize-minimize round (empty for plain solve_ot).
  std::vector<double> round_objectives;
};

/// min_{Gamma in Omega} <Gamma, cost>. Marginals with a finite penalty are
/// enforced as KL divergence penalties of that weight (unbalanced scaling);
/// hard marginals are exact scaling projections.
OtResult solve_ot(const Matrix& cost, const Marginal& alpha,
                  const Marginal& beta, const OtConfig& cfg = {},
                  const std::optional<TransportPlan>& warm_start = std::nullopt);

/// min <Gamma, cost> + tau * R(Gamma) by majorize-minimize: fix each row's
/// argmax cell (ties to the lowest column), subtract tau from the cost
/// there, re-solve, and repeat until the argmax pattern stabilizes. Returns
/// the best iterate by the regularized objective.
OtResult solve_ot_regularized(
    const Matrix& cost, const Marginal& alpha, const Marginal& beta,
    double tau, const OtConfig& cfg = {},
    const std::optional<TransportPlan>& warm_start = std::nullopt);

/// Repairs an approximately feasible plan so both marginals hold exactly:
/// scale rows down to alpha, columns down to beta, then spread the leftover
/// mass as (row deficit)(column deficit)^T / total deficit.
TransportPlan round_to_polytope(const TransportPlan& plan, const Marginal& alpha,
                                const Marginal& beta);

/// Brute-force test oracle: with uniform marginals and n = m, an optimal
/// plan is (1/n) times a cost-minimizing permutation matrix. Enumerates all
/// n! permutations; ties go to the lexicographically smallest one.
TransportPlan assignment_oracle(const Matrix& cost);

struct CurriculumSchedule {
  enum class Mode { kNone, kLinear };
  int total_iters = 1;
  double penalty_max = 100.0;
  Mode mode = Mode::kNone;

  void validate() const;
};

struct MarginalPenalties {
  double alpha_penalty = kHardMarginal;
  double beta_penalty = kHardMarginal;
  bool clamped = false;
};

/// Early iterations enforce beta (balanced training load) and leave alpha
/// loose; the ramp trades them linearly so late iterations enforce alpha
/// (full objective coverage) instead.
MarginalPenalties schedule_marginal_penalties(int t,
                                              const CurriculumSchedule& sched);

}  // namespace most

#endif  // MOST_TRANSPORT_HPP_
