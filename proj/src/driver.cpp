#include "most/driver.hpp"

#include <chrono>
#include <cmath>

#include "most/core.hpp"
#include "most/metrics.hpp"
#include "most/rng.hpp"

namespace most {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Vector> init_solutions(int m, int dim, double stddev,
                                   std::uint64_t seed) {
  std::vector<Vector> params(m);
  for (int j = 0; j < m; ++j) {
    Rng rng = make_rng(seed, "init", j);
    params[j] = stddev > 0.0 ? sample_gaussian(rng, dim, 0.0, stddev)
                             : Vector::Zero(dim);
  }
  return params;
}

Problem iteration_problem(const Problem& problem, const RunConfig& cfg, int t) {
  if (cfg.minibatch_fraction >= 1.0) return problem;
  auto view = problem.family()->minibatched(
      cfg.minibatch_fraction, derive_seed(cfg.seed, "minibatch.iter", t));
  return view ? Problem(view) : problem;
}

IterationRecord make_iteration_record(int t, Matrix losses,
                                      const TransportPlan& plan, double tau,
                                      const std::optional<TransportPlan>& prev,
                                      const std::vector<DescentResult>& steps) {
  IterationRecord rec;
  rec.iter = t;
  rec.potential = plan.entries().cwiseProduct(losses).sum() +
                  tau * plan_regularizer(plan);
  rec.losses = std::move(losses);
  rec.sparsity = sparsity_fraction(plan, kSparsityZeroTol);
  rec.regularizer_value = plan_regularizer(plan);
  rec.diversity = plan_diversity(plan);
  rec.plan_kl = prev ? symmetric_kl(plan, *prev) : 0.0;
  rec.d_sq_norms.resize(static_cast<Eigen::Index>(steps.size()));
  rec.max_contract_violation = 0.0;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    rec.d_sq_norms[static_cast<Eigen::Index>(j)] = steps[j].sq_norm;
    if (!steps[j].empty_support) {
      rec.max_contract_violation =
          std::max(rec.max_contract_violation, steps[j].max_contract_violation);
    }
  }
  return rec;
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::kMost: return "most";
    case Method::kLinearization: return "linearization";
    case Method::kMgdaRestarts: return "mgda_restarts";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "most") return Method::kMost;
  if (name == "linearization") return Method::kLinearization;
  if (name == "mgda_restarts") return Method::kMgdaRestarts;
  throw std::invalid_argument("unknown method: " + name);
}

void RunConfig::validate() const {
  if (m < 1) throw std::invalid_argument("RunConfig: m must be >= 1");
  if (T < 0) throw std::invalid_argument("RunConfig: T must be >= 0");
  if (K < 1) throw std::invalid_argument("RunConfig: K must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("RunConfig: eta must be > 0");
  if (!(tau >= 0.0)) throw std::invalid_argument("RunConfig: tau must be >= 0");
  if (init_stddev < 0.0) {
    throw std::invalid_argument("RunConfig: init_stddev must be >= 0");
  }
  if (!(minibatch_fraction > 0.0) || minibatch_fraction > 1.0) {
    throw std::invalid_argument("RunConfig: minibatch_fraction must be in (0, 1]");
  }
  if (extend) {
    if (extend->n_prime < 1 || !(extend->concentration > 0.0)) {
      throw std::invalid_argument("RunConfig: bad extension spec");
    }
  }
  ot.validate();
  minnorm.validate();
}

bool records_match(const RunRecord& a, const RunRecord& b) {
  if (a.iterations.size() != b.iterations.size()) return false;
  if (a.aborted != b.aborted || a.abort_reason != b.abort_reason) return false;
  if (a.initial_losses != b.initial_losses) return false;
  if (a.final_plan.entries() != b.final_plan.entries()) return false;
  if (a.final_solutions.params.size() != b.final_solutions.params.size()) {
    return false;
  }
  for (std::size_t j = 0; j < a.final_solutions.params.size(); ++j) {
    if (a.final_solutions.params[j] != b.final_solutions.params[j]) return false;
  }
  for (std::size_t t = 0; t < a.iterations.size(); ++t) {
    const IterationRecord& x = a.iterations[t];
    const IterationRecord& y = b.iterations[t];
    if (x.iter != y.iter || x.losses != y.losses ||
        x.potential != y.potential || x.sparsity != y.sparsity ||
        x.regularizer_value != y.regularizer_value ||
        x.diversity != y.diversity || x.plan_kl != y.plan_kl ||
        x.d_sq_norms != y.d_sq_norms ||
        x.max_contract_violation != y.max_contract_violation) {
      return false;
    }
  }
  return true;
}

Matrix loss_matrix(const Problem& problem, const std::vector<Vector>& solutions,
                   Exec exec) {
  const int n = problem.n_objectives();
  const auto m = static_cast<int>(solutions.size());
  Matrix losses(n, m);
  parallel_for(exec, static_cast<std::int64_t>(n) * m, [&](std::int64_t idx) {
    const int i = static_cast<int>(idx % n);
    const int j = static_cast<int>(idx / n);
    losses(i, j) = problem.eval(i, solutions[j]);
  });
  return losses;
}

RunRecord run_most(const Problem& base_problem, const RunConfig& cfg) {
  cfg.validate();
  if (cfg.method != Method::kMost) {
    throw std::invalid_argument("run_most: config method is not most");
  }
  const Problem problem =
      cfg.extend ? extend_objectives(base_problem, cfg.extend->n_prime,
                                     cfg.extend->concentration, cfg.seed)
                 : base_problem;
  const int n = problem.n_objectives();
  const int m = cfg.m;
  const Marginal alpha = Marginal::uniform(n);
  const Marginal beta = Marginal::uniform(m);

  std::vector<Vector> params =
      init_solutions(m, problem.param_dim(), cfg.init_stddev, cfg.seed);

  RunRecord record;
  record.initial_losses = loss_matrix(problem, params, cfg.exec);
  record.final_plan =
      TransportPlan(alpha.weights() * beta.weights().transpose());

  std::optional<TransportPlan> previous_plan;
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t_start = Clock::now();
    try {
      const Problem pt = iteration_problem(problem, cfg, t);
      const Matrix losses = loss_matrix(pt, params, cfg.exec);

      const MarginalPenalties pen =
          schedule_marginal_penalties(t - 1, cfg.curriculum);
      const Marginal alpha_t(alpha.weights(), pen.alpha_penalty);
      const Marginal beta_t(beta.weights(), pen.beta_penalty);
      const OtResult ot = solve_ot_regularized(losses, alpha_t, beta_t, cfg.tau,
                                               cfg.ot, previous_plan);
      TransportPlan plan = round_to_polytope(ot.plan, alpha, beta);
      if (previous_plan && alpha_t.hard() && beta_t.hard()) {
        // Both rounded plans are feasible; keep whichever scores better on
        // the current losses so the potential never rises through rounding
        // noise.
        const auto score = [&](const TransportPlan& p) {
          return p.entries().cwiseProduct(losses).sum() +
                 cfg.tau * plan_regularizer(p);
        };
        if (score(*previous_plan) < score(plan)) plan = *previous_plan;
      }

      std::vector<Vector> next(m);
      std::vector<DescentResult> steps(m);
      parallel_for(cfg.exec, m, [&](std::int64_t j) {
        auto [theta, result] = inner_descent(pt, params[j], plan.column(j),
                                             cfg.eta, cfg.K, cfg.minnorm);
        next[j] = std::move(theta);
        steps[j] = std::move(result);
      });
      params = std::move(next);

      IterationRecord iter = make_iteration_record(t, losses, plan, cfg.tau,
                                                   previous_plan, steps);
      iter.wall_seconds = seconds_since(t_start);
      record.iterations.push_back(std::move(iter));
      previous_plan = plan;
      record.final_plan = plan;
    } catch (const std::exception& err) {
      record.aborted = true;
      record.abort_reason = err.what();
      break;
    }
  }
  record.final_solutions = SolutionSet(std::move(params), cfg.eta, cfg.K);
  return record;
}

namespace {

RunRecord run_linearization(const Problem& problem, const RunConfig& cfg) {
  const int n = problem.n_objectives();
  const int m = cfg.m;
  Matrix weights(n, m);
  for (int j = 0; j < m; ++j) {
    if (cfg.uniform_weights) {
      weights.col(j) = Vector::Constant(n, 1.0 / n);
    } else {
      Rng rng = make_rng(cfg.seed, "linearization.weights", j);
      weights.col(j) = sample_simplex(rng, n);
    }
  }
  // Fixed pseudo-plan: the weight columns scaled to unit total mass, so the
  // record carries the same plan statistics as MosT runs.
  const TransportPlan pseudo_plan(weights / static_cast<double>(m));

  std::vector<Vector> params =
      init_solutions(m, problem.param_dim(), cfg.init_stddev, cfg.seed);

  RunRecord record;
  record.initial_losses = loss_matrix(problem, params, cfg.exec);
  record.final_plan = pseudo_plan;

  std::optional<TransportPlan> previous_plan;
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t_start = Clock::now();
    try {
      const Problem pt = iteration_problem(problem, cfg, t);
      const Matrix losses = loss_matrix(pt, params, cfg.exec);

      std::vector<Vector> next(m);
      std::vector<DescentResult> steps(m);
      parallel_for(cfg.exec, m, [&](std::int64_t j) {
        Vector theta = params[j];
        Vector grad_sum, grad;
        for (int k = 0; k < cfg.K; ++k) {
          grad_sum = Vector::Zero(theta.size());
          for (int i = 0; i < n; ++i) {
            pt.eval(i, theta, &grad);
            grad_sum += weights(i, j) * grad;
          }
          theta -= cfg.eta * grad_sum;
        }
        DescentResult res;
        res.direction = -grad_sum;
        res.sq_norm = grad_sum.squaredNorm();
        res.empty_support = true;  // no descent contract to report
        next[j] = std::move(theta);
        steps[j] = std::move(res);
      });
      params = std::move(next);

      IterationRecord iter = make_iteration_record(t, losses, pseudo_plan,
                                                   cfg.tau, previous_plan, steps);
      iter.wall_seconds = seconds_since(t_start);
      record.iterations.push_back(std::move(iter));
      previous_plan = pseudo_plan;
    } catch (const std::exception& err) {
      record.aborted = true;
      record.abort_reason = err.what();
      break;
    }
  }
  record.final_solutions = SolutionSet(std::move(params), cfg.eta, cfg.K);
  return record;
}

RunRecord run_mgda_restarts(const Problem& problem, const RunConfig& cfg) {
  const int n = problem.n_objectives();
  const int m = cfg.m;
  // Unweighted MGDA: every objective enters each solution's min-norm
  // problem with weight one.
  const Vector ones_column = Vector::Ones(n);
  const TransportPlan pseudo_plan(
      Matrix::Constant(n, m, 1.0 / static_cast<double>(n * m)));

  std::vector<Vector> params =
      init_solutions(m, problem.param_dim(), cfg.init_stddev, cfg.seed);

  RunRecord record;
  record.initial_losses = loss_matrix(problem, params, cfg.exec);
  record.final_plan = pseudo_plan;

  std::optional<TransportPlan> previous_plan;
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t_start = Clock::now();
    try {
      const Problem pt = iteration_problem(problem, cfg, t);
      const Matrix losses = loss_matrix(pt, params, cfg.exec);

      std::vector<Vector> next(m);
      std::vector<DescentResult> steps(m);
      parallel_for(cfg.exec, m, [&](std::int64_t j) {
        auto [theta, result] = inner_descent(pt, params[j], ones_column,
                                             cfg.eta, cfg.K, cfg.minnorm);
        next[j] = std::move(theta);
        steps[j] = std::move(result);
      });
      params = std::move(next);

      IterationRecord iter = make_iteration_record(t, losses, pseudo_plan,
                                                   cfg.tau, previous_plan, steps);
      iter.wall_seconds = seconds_since(t_start);
      record.iterations.push_back(std::move(iter));
      previous_plan = pseudo_plan;
    } catch (const std::exception& err) {
      record.aborted = true;
      record.abort_reason = err.what();
      break;
    }
  }
  record.final_solutions = SolutionSet(std::move(params), cfg.eta, cfg.K);
  return record;
}

}  // namespace

RunRecord run_baseline(const Problem& problem, const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.method) {
    case Method::kLinearization: return run_linearization(problem, cfg);
    case Method::kMgdaRestarts: return run_mgda_restarts(problem, cfg);
    default:
      throw std::invalid_argument("run_baseline: method must be a baseline");
  }
}

RunRecord run(const Problem& problem, const RunConfig& cfg) {
  return cfg.method == Method::kMost ? run_most(problem, cfg)
                                     : run_baseline(problem, cfg);
}

namespace {

class ExtendedFamily : public ObjectiveFamily {
 public:
  ExtendedFamily(std::shared_ptr<const ObjectiveFamily> base, Matrix weights)
      : base_(std::move(base)), weights_(std::move(weights)) {}

  int n_objectives() const override {
    return base_->n_objectives() + static_cast<int>(weights_.rows());
  }
  int param_dim() const override { return base_->param_dim(); }

  double eval(int i, const Vector& theta, Vector* grad) const override {
    const int n = base_->n_objectives();
    if (i < n) return base_->eval(i, theta, grad);
    const auto row = weights_.row(i - n);
    double value = 0.0;
    Vector part;
    if (grad) grad->setZero(theta.size());
    for (int l = 0; l < n; ++l) {
      value += row[l] * base_->eval(l, theta, grad ? &part : nullptr);
      if (grad) *grad += row[l] * part;
    }
    return value;
  }

  std::string name() const override { return base_->name() + "+extended"; }
  std::uint64_t seed() const override { return base_->seed(); }

  std::shared_ptr<const ObjectiveFamily> minibatched(
      double fraction, std::uint64_t seed) const override {
    auto sub = base_->minibatched(fraction, seed);
    if (!sub) return nullptr;
    return std::make_shared<ExtendedFamily>(std::move(sub), weights_);
  }

  const Matrix& weights() const { return weights_; }

 private:
  std::shared_ptr<const ObjectiveFamily> base_;
  Matrix weights_;  // (n' - n) x n mixture rows
};

}  // namespace

Problem extend_objectives(const Problem& problem, int n_prime,
                          double concentration, std::uint64_t seed) {
  const int n = problem.n_objectives();
  if (n_prime <= n) {
    throw std::invalid_argument(
        "extend_objectives: n_prime must exceed the current objective count");
  }
  Matrix weights(n_prime - n, n);
  for (int r = 0; r < n_prime - n; ++r) {
    Rng rng = make_rng(seed, "extension.weights", r);
    weights.row(r) = sample_dirichlet(rng, n, concentration).transpose();
  }
  return Problem(
      std::make_shared<ExtendedFamily>(problem.family(), std::move(weights)));
}

const Matrix* extension_weights(const Problem& problem) {
  const auto* family =
      dynamic_cast<const ExtendedFamily*>(problem.family().get());
  return family ? &family->weights() : nullptr;
}

std::vector<int> select_best_per_objective(const Matrix& loss_matrix) {
  std::vector<int> best(loss_matrix.rows());
  for (Eigen::Index i = 0; i < loss_matrix.rows(); ++i) {
    Eigen::Index j = 0;
    loss_matrix.row(i).minCoeff(&j);  // first minimum: lowest index on ties
    best[i] = static_cast<int>(j);
  }
  return best;
}

}  // namespace most
