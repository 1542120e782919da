#include "most/descent.hpp"

#include <algorithm>
#include <cmath>

namespace most {

void MinNormConfig::validate() const {
  if (max_iters < 1) {
    throw std::invalid_argument("MinNormConfig: max_iters must be >= 1");
  }
  if (!(gap_tol > 0.0)) {
    throw std::invalid_argument("MinNormConfig: gap_tol must be > 0");
  }
  if (support_eps < 0.0) {
    throw std::invalid_argument("MinNormConfig: support_eps must be >= 0");
  }
  if (support_rel < 0.0 || support_rel >= 1.0) {
    throw std::invalid_argument("MinNormConfig: support_rel must be in [0, 1)");
  }
}

MinNormResult min_norm_weights(const std::vector<Vector>& gradients,
                               const MinNormConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(gradients.size());
  if (n == 0) {
    throw std::invalid_argument("min_norm_weights: empty support");
  }
  const Eigen::Index dim = gradients[0].size();
  for (const Vector& g : gradients) {
    if (g.size() != dim) {
      throw std::invalid_argument("min_norm_weights: inconsistent lengths");
    }
    if (!g.allFinite()) {
      throw std::invalid_argument("min_norm_weights: non-finite gradient");
    }
  }

  // All Frank-Wolfe quantities live in the Gram geometry: with
  // G_ik = g_i . g_k, f(lambda) = lambda^T G lambda and v.g_i = (G lambda)_i.
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) {
      gram(i, k) = gradients[i].dot(gradients[k]);
      gram(k, i) = gram(i, k);
    }
  }

  Vector lambda = Vector::Constant(n, 1.0 / n);
  Vector glambda = gram * lambda;  // (G lambda)_i = g_i . v

  // Wolfe-style corrective cycle: jump to the exact affine minimizer over
  // the current support, dropping blocking vertices until it is feasible.
  // Once the support is right this lands on the optimum, so the duality gap
  // collapses instead of decaying like 1/k.
  const auto affine_minimizer = [&](const std::vector<int>& support,
                                    Vector* out) {
    const int k = static_cast<int>(support.size());
    Matrix bordered(k + 1, k + 1);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) bordered(r, c) = gram(support[r], support[c]);
      bordered(r, k) = 1.0;
      bordered(k, r) = 1.0;
    }
    bordered(k, k) = 0.0;
    Vector rhs = Vector::Zero(k + 1);
    rhs[k] = 1.0;
    // The KKT system is consistent but can be rank-deficient (more support
    // vectors than gradient dimensions); take the least-norm solution.
    const Vector solution =
        bordered.completeOrthogonalDecomposition().solve(rhs);
    if ((bordered * solution - rhs).cwiseAbs().maxCoeff() > 1e-9) return false;
    *out = solution.head(k);
    return true;
  };

  const auto try_corrective = [&]() {
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (lambda[i] > 0.0) support.push_back(i);
    }
    Vector x(support.size());
    for (std::size_t r = 0; r < support.size(); ++r) x[r] = lambda[support[r]];

    for (int drops = 0; drops <= n && !support.empty(); ++drops) {
      Vector y;
      if (!affine_minimizer(support, &y)) return;
      if ((y.array() >= 0.0).all()) {
        Vector candidate = Vector::Zero(n);
        for (std::size_t r = 0; r < support.size(); ++r) {
          candidate[support[r]] = y[r];
        }
        candidate /= candidate.sum();
        const Vector gcand = gram * candidate;
        if (candidate.dot(gcand) <= lambda.dot(glambda)) {
          lambda = candidate;
          glambda = gcand;
        }
        return;
      }
      // Walk toward y until the first coordinate hits zero; drop it and
      // re-solve on the smaller support.
      double theta = 1.0;
      Eigen::Index blocker = 0;
      for (Eigen::Index r = 0; r < y.size(); ++r) {
        if (y[r] < 0.0 && x[r] / (x[r] - y[r]) < theta) {
          theta = x[r] / (x[r] - y[r]);
          blocker = r;
        }
      }
      x = (x + theta * (y - x)).cwiseMax(0.0);
      std::vector<int> kept;
      std::vector<double> kept_x;
      for (Eigen::Index r = 0; r < x.size(); ++r) {
        if (r == blocker || x[r] <= 0.0) continue;
        kept.push_back(support[r]);
        kept_x.push_back(x[r]);
      }
      support = std::move(kept);
      x = Eigen::Map<const Vector>(kept_x.data(),
                                   static_cast<Eigen::Index>(kept_x.size()));
      if (x.size() > 0) x /= x.sum();
    }
  };

  MinNormResult result;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if ((iter & 31) == 31) try_corrective();
    const double vv = lambda.dot(glambda);  // ||v||^2
    Eigen::Index s = 0;
    const double sv = glambda.minCoeff(&s);  // LMO over the simplex
    result.gap = 2.0 * (vv - sv);
    if (result.gap <= cfg.gap_tol) {
      result.converged = true;
      break;
    }
    // Away vertex: the worst-scoring vertex currently carrying weight.
    Eigen::Index a = s;
    double av = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lambda[i] > 0.0 && glambda[i] > av) {
        av = glambda[i];
        a = i;
      }
    }
    const bool toward = (vv - sv) >= (av - vv);
    if (toward) {
      // Exact line search on the segment from v to vertex s:
      // gamma* = (v - s).v / ||v - s||^2 clipped to [0, 1].
      const double denom = vv - 2.0 * sv + gram(s, s);  // ||v - s||^2
      double gamma = denom > 0.0 ? (vv - sv) / denom : 0.0;
      gamma = std::clamp(gamma, 0.0, 1.0);
      if (gamma == 0.0) break;
      lambda *= (1.0 - gamma);
      lambda[s] += gamma;
      glambda = (1.0 - gamma) * glambda + gamma * gram.col(s);
    } else {
      // Away step along v - a, capped so lambda_a stays nonnegative; the
      // same exact line search applied to the reversed segment.
      if (lambda[a] >= 1.0) break;  // single-vertex support cannot move away
      const double denom = vv - 2.0 * av + gram(a, a);  // ||v - a||^2
      double gamma = denom > 0.0 ? (av - vv) / denom : 0.0;
      gamma = std::min(gamma, lambda[a] / (1.0 - lambda[a]));
      if (gamma <= 0.0) break;
      lambda *= (1.0 + gamma);
      lambda[a] -= gamma;
      if (lambda[a] < 1e-16) lambda[a] = 0.0;  // drop the vertex cleanly
      glambda = (1.0 + gamma) * glambda - gamma * gram.col(a);
    }
  }
  lambda /= lambda.sum();  // vertex drops can leave 1e-16-level drift
  result.sq_norm = std::max(0.0, lambda.dot(gram * lambda));
  result.weights = std::move(lambda);
  return result;
}

DescentResult descent_direction(const Problem& problem, const Vector& theta,
                                const Vector& plan_column,
                                const MinNormConfig& cfg) {
  cfg.validate();
  if (plan_column.size() != problem.n_objectives()) {
    throw std::invalid_argument("descent_direction: plan column length mismatch");
  }
  if ((plan_column.array() < 0.0).any()) {
    throw std::invalid_argument("descent_direction: plan column must be nonnegative");
  }

  DescentResult result;
  result.direction = Vector::Zero(problem.param_dim());
  const double cutoff =
      std::max(cfg.support_eps, cfg.support_rel * plan_column.maxCoeff());
  for (int i = 0; i < plan_column.size(); ++i) {
    if (plan_column[i] > cutoff) result.support.push_back(i);
  }
  if (result.support.empty()) {
    result.empty_support = true;
    return result;
  }

  std::vector<Vector> weighted(result.support.size());
  for (std::size_t k = 0; k < result.support.size(); ++k) {
    const int i = result.support[k];
    Vector grad;
    problem.eval(i, theta, &grad);
    if (!grad.allFinite()) {
      throw std::runtime_error("descent_direction: non-finite gradient from objective " +
                               std::to_string(i));
    }
    weighted[k] = plan_column[i] * grad;
  }

  MinNormResult mn = min_norm_weights(weighted, cfg);
  for (std::size_t k = 0; k < weighted.size(); ++k) {
    result.direction -= mn.weights[k] * weighted[k];
  }
  result.dual_weights = std::move(mn.weights);
  result.sq_norm = result.direction.squaredNorm();

  double worst = -std::numeric_limits<double>::infinity();
  for (const Vector& g : weighted) {
    worst = std::max(worst, g.dot(result.direction) + 0.5 * result.sq_norm);
  }
  result.max_contract_violation = worst;
  return result;
}

std::pair<Vector, DescentResult> inner_descent(const Problem& problem,
                                               Vector theta,
                                               const Vector& plan_column,
                                               double eta, int steps,
                                               const MinNormConfig& cfg) {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("inner_descent: eta must be > 0");
  }
  if (steps < 1) {
    throw std::invalid_argument("inner_descent: step count must be >= 1");
  }
  DescentResult last;
  double worst_violation = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < steps; ++k) {
    last = descent_direction(problem, theta, plan_column, cfg);
    if (!last.empty_support) {
      worst_violation = std::max(worst_violation, last.max_contract_violation);
    }
    theta += eta * last.direction;
  }
  if (worst_violation > -std::numeric_limits<double>::infinity()) {
    last.max_contract_violation = worst_violation;
  }
  return {std::move(theta), std::move(last)};
}

}  // namespace most
