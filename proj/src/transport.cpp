#include "most/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace most {

namespace {

constexpr double kTiny = 1e-300;

// Scaling exponent of the unbalanced Sinkhorn update: rho/(rho + eps),
// which degenerates to 1 (exact projection) for hard marginals and to 0
// (constraint dropped) for penalty 0.
double scaling_exponent(double penalty, double eps) {
  if (penalty == kHardMarginal) return 1.0;
  return penalty / (penalty + eps);
}

Vector scaled_ratio(const Vector& target, const Vector& denom, double exponent) {
  Vector out(target.size());
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    double ratio = target[i] / std::max(denom[i], kTiny);
    out[i] = exponent == 1.0 ? ratio : std::pow(ratio, exponent);
  }
  return out;
}

std::vector<Eigen::Index> row_argmax(const Matrix& entries) {
  std::vector<Eigen::Index> pattern(entries.rows());
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    Eigen::Index j = 0;
    entries.row(i).maxCoeff(&j);  // first maximum, so ties go to lowest j
    pattern[i] = j;
  }
  return pattern;
}

double regularized_cost(const Matrix& cost, double tau,
                        const TransportPlan& plan) {
  return plan.entries().cwiseProduct(cost).sum() + tau * plan_regularizer(plan);
}

// Greedy concentration vertex: rows in order put their whole mass on the
// cheapest column with remaining capacity (ties to the lowest index),
// spilling over only when a column fills up. Gives the regularizer the
// fully-concentrated candidate it favors, which entropic solves never
// produce on exactly degenerate costs.
Matrix greedy_concentration_plan(const Matrix& cost, const Marginal& alpha,
                                 const Marginal& beta) {
  Matrix plan = Matrix::Zero(cost.rows(), cost.cols());
  Vector remaining = beta.weights();
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    double mass = alpha[i];
    while (mass > 1e-15) {
      Eigen::Index pick = -1;
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        if (remaining[j] <= 1e-15) continue;
        if (pick < 0 || cost(i, j) < cost(i, pick)) pick = j;
      }
      if (pick < 0) break;  // capacities exhausted by roundoff
      const double take = std::min(mass, remaining[pick]);
      plan(i, pick) += take;
      remaining[pick] -= take;
      mass -= take;
    }
  }
  return plan;
}

}  // namespace

void OtConfig::validate() const {
  if (inner_iters < 1 || outer_iters < 1 || regularizer_max_rounds < 1) {
    throw std::invalid_argument("OtConfig: iteration counts must be >= 1");
  }
  if (!(proximal_weight > 0.0) || !(stop_tol > 0.0)) {
    throw std::invalid_argument("OtConfig: scalars must be positive");
  }
}

OtResult solve_ot(const Matrix& cost, const Marginal& alpha,
                  const Marginal& beta, const OtConfig& cfg,
                  const std::optional<TransportPlan>& warm_start) {
  cfg.validate();
  if (!cost.allFinite()) {
    throw std::invalid_argument("solve_ot: cost entries must be finite");
  }
  if (cost.rows() != alpha.dim() || cost.cols() != beta.dim()) {
    throw std::invalid_argument("solve_ot: cost shape does not match marginals");
  }

  // The transport objective is invariant to a constant cost shift when both
  // marginals are hard; shifting keeps the kernel away from underflow.
  Matrix shifted = cost;
  if (alpha.hard() && beta.hard()) {
    shifted.array() -= cost.minCoeff();
  }
  // Wide cost ranges would underflow exp(-C/eps) to hard zeros that no
  // scaling can ever repopulate; cap the exponent around -500.
  const double range = shifted.cwiseAbs().maxCoeff();
  const double eps = std::max(cfg.proximal_weight, range / 500.0);
  const double exp_row = scaling_exponent(alpha.penalty(), eps);
  const double exp_col = scaling_exponent(beta.penalty(), eps);
  const Matrix kernel = (-shifted / eps).array().exp();

  const Matrix product = alpha.weights() * beta.weights().transpose();
  Matrix plan = product;
  if (warm_start) {
    if (warm_start->rows() != cost.rows() || warm_start->cols() != cost.cols()) {
      throw std::invalid_argument("solve_ot: warm start shape mismatch");
    }
    // Blend keeps the support full: the proximal kernel multiplies by the
    // previous plan, so exact zeros would otherwise be permanent.
    plan = 0.999 * warm_start->entries() + 0.001 * product;
  }

  bool converged = false;
  int iters = 0;
  // The column scaling persists across proximal steps: each inner loop
  // warm-starts from the previous duals, which keeps the scalings effective
  // as the composed kernel sharpens.
  Vector u = Vector::Ones(cost.rows());
  Vector v = Vector::Ones(cost.cols());
  for (; iters < cfg.outer_iters; ++iters) {
    const Matrix q = kernel.cwiseProduct(plan);
    for (int k = 0; k < cfg.inner_iters; ++k) {
      u = scaled_ratio(alpha.weights(), q * v, exp_row);
      v = scaled_ratio(beta.weights(), q.transpose() * u, exp_col);
    }
    Matrix next = u.asDiagonal() * q * v.asDiagonal();
    const double change = (next - plan).cwiseAbs().maxCoeff();
    plan = std::move(next);
    if (change <= cfg.stop_tol) {
      converged = true;
      ++iters;
      break;
    }
  }
  return OtResult{TransportPlan(plan), converged, iters};
}

OtResult solve_ot_regularized(const Matrix& cost, const Marginal& alpha,
                              const Marginal& beta, double tau,
                              const OtConfig& cfg,
                              const std::optional<TransportPlan>& warm_start) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("solve_ot_regularized: tau must be nonnegative");
  }
  OtResult base = solve_ot(cost, alpha, beta, cfg, warm_start);
  if (tau == 0.0) return base;

  OtResult best = base;
  double best_obj = regularized_cost(cost, tau, base.plan);
  std::vector<double> trace{best_obj};
  const auto offer = [&](const TransportPlan& plan) {
    const double obj = regularized_cost(cost, tau, plan);
    if (obj < best_obj) {
      best = OtResult{plan, true, 0};
      best_obj = obj;
    }
  };
  // A feasible warm start is itself a valid candidate; keeping it when no
  // round improves on it makes the outer alternation's potential monotone.
  if (warm_start && alpha.hard() && beta.hard() &&
      validate_plan(*warm_start, alpha, beta, 1e-9).feasible) {
    offer(*warm_start);
  }
  if (alpha.hard() && beta.hard()) {
    offer(TransportPlan(greedy_concentration_plan(cost, alpha, beta)));
  }

  std::vector<Eigen::Index> pattern = row_argmax(base.plan.entries());
  TransportPlan current = base.plan;
  bool stable = false;
  bool solves_converged = base.converged;
  for (int round = 0; round < cfg.regularizer_max_rounds; ++round) {
    Matrix augmented = cost;
    for (Eigen::Index i = 0; i < augmented.rows(); ++i) {
      augmented(i, pattern[i]) -= tau;
    }
    OtResult r = solve_ot(augmented, alpha, beta, cfg, current);
    current = r.plan;
    solves_converged = solves_converged && r.converged;
    const double obj = regularized_cost(cost, tau, current);
    trace.push_back(obj);
    if (obj < best_obj) {
      best = r;
      best_obj = obj;
    }
    std::vector<Eigen::Index> next_pattern = row_argmax(current.entries());
    if (next_pattern == pattern) {
      stable = true;
      break;
    }
    pattern = std::move(next_pattern);
  }
  best.converged = stable && solves_converged;
  best.round_objectives = std::move(trace);
  return best;
}

TransportPlan round_to_polytope(const TransportPlan& plan, const Marginal& alpha,
                                const Marginal& beta) {
  if (plan.rows() != alpha.dim() || plan.cols() != beta.dim()) {
    throw std::invalid_argument("round_to_polytope: shape mismatch");
  }
  if (plan.total_mass() <= 0.0) {
    throw std::invalid_argument(
        "round_to_polytope: zero-mass plan cannot satisfy nonzero marginals");
  }
  Matrix x = plan.entries();
  const Vector row_sum = x.rowwise().sum();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (row_sum[i] > alpha[i]) x.row(i) *= alpha[i] / row_sum[i];
  }
  const Vector col_sum = x.colwise().sum();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (col_sum[j] > beta[j]) x.col(j) *= beta[j] / col_sum[j];
  }
  Vector row_deficit = (alpha.weights() - x.rowwise().sum()).cwiseMax(0.0);
  Vector col_deficit =
      (beta.weights() - x.colwise().sum().transpose()).cwiseMax(0.0);
  const double deficit = row_deficit.sum();
  if (deficit > 0.0) {
    x += row_deficit * col_deficit.transpose() / deficit;
  }
  return TransportPlan(std::move(x));
}

TransportPlan assignment_oracle(const Matrix& cost) {
  const Eigen::Index n = cost.rows();
  if (n != cost.cols()) {
    throw std::invalid_argument("assignment_oracle: cost must be square");
  }
  if (n > 8) {
    throw std::invalid_argument(
        "assignment_oracle: refusing n > 8 (factorial enumeration)");
  }
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Eigen::Index> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) c += cost(i, perm[i]);
    if (c < best_cost) {  // strict: lexicographically first minimizer wins
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Matrix plan = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    plan(i, best[i]) = 1.0 / static_cast<double>(n);
  }
  return TransportPlan(std::move(plan));
}

void CurriculumSchedule::validate() const {
  if (total_iters < 1) {
    throw std::invalid_argument("CurriculumSchedule: total_iters must be >= 1");
  }
  if (!(penalty_max > 0.0)) {
    throw std::invalid_argument("CurriculumSchedule: penalty_max must be > 0");
  }
}

MarginalPenalties schedule_marginal_penalties(int t,
                                              const CurriculumSchedule& sched) {
  sched.validate();
  if (t < 0) {
    throw std::invalid_argument("schedule_marginal_penalties: t must be >= 0");
  }
  MarginalPenalties out;
  if (t > sched.total_iters) {
    t = sched.total_iters;
    out.clamped = true;
  }
  if (sched.mode == CurriculumSchedule::Mode::kNone) {
    return out;
  }
  const double frac = static_cast<double>(t) / sched.total_iters;
  out.alpha_penalty = sched.penalty_max * frac;
  out.beta_penalty = sched.penalty_max * (1.0 - frac);
  return out;
}

}  // namespace most
