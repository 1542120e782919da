#include "most/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "most/descent.hpp"
#include "most/metrics.hpp"
#include "most/problems.hpp"
#include "most/rng.hpp"
#include "most/transport.hpp"

namespace most {

double min_norm_grid_oracle(const std::vector<Vector>& gradients, double step) {
  const int n = static_cast<int>(gradients.size());
  if (n < 1 || n > 3) {
    throw std::invalid_argument("min_norm_grid_oracle: supports 1 to 3 vectors");
  }
  if (!(step > 0.0) || step > 1.0) {
    throw std::invalid_argument("min_norm_grid_oracle: bad step");
  }
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) gram(i, k) = gradients[i].dot(gradients[k]);
  }
  const int ticks = static_cast<int>(std::lround(1.0 / step));
  auto value = [&](double a, double b, double c) {
    Vector lambda(n);
    if (n == 1) lambda << a + b + c;
    if (n == 2) lambda << a, b + c;
    if (n == 3) lambda << a, b, c;
    return lambda.dot(gram * lambda);
  };
  double best = std::numeric_limits<double>::infinity();
  if (n == 1) return value(1.0, 0.0, 0.0);
  for (int i = 0; i <= ticks; ++i) {
    if (n == 2) {
      best = std::min(best, value(i * step, 1.0 - i * step, 0.0));
      continue;
    }
    for (int j = 0; i + j <= ticks; ++j) {
      best = std::min(best,
                      value(i * step, j * step, 1.0 - (i + j) * step));
    }
  }
  return best;
}

double hypervolume_grid_oracle(
    const std::vector<std::pair<double, double>>& points,
    std::pair<double, double> ref, double resolution) {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("hypervolume_grid_oracle: bad resolution");
  }
  std::vector<std::pair<double, double>> inside;
  for (const auto& p : points) {
    if (p.first <= ref.first && p.second <= ref.second) inside.push_back(p);
  }
  if (inside.empty()) return 0.0;
  double x_lo = ref.first;
  for (const auto& p : inside) x_lo = std::min(x_lo, p.first);
  const double width = ref.first - x_lo;
  if (width <= 0.0) return 0.0;
  const auto cells =
      static_cast<long>(std::ceil(width / resolution));
  const double cell_w = width / static_cast<double>(cells);
  double area = 0.0;
  for (long k = 0; k < cells; ++k) {
    const double x = x_lo + (static_cast<double>(k) + 0.5) * cell_w;
    double best_f2 = ref.second;
    for (const auto& p : inside) {
      if (p.first <= x) best_f2 = std::min(best_f2, p.second);
    }
    area += (ref.second - best_f2) * cell_w;
  }
  return area;
}

SuiteReport ot_oracle_suite(int cases, std::uint64_t seed) {
  SuiteReport report{"ot", cases, 0.0, 1e-6, false};
  // Tight solve: the comparison targets the solver's converged answer, not
  // the driver-loop defaults.
  OtConfig cfg;
  cfg.outer_iters = 3000;
  cfg.stop_tol = 1e-12;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    Rng rng = make_rng(seed, "oracle.ot", c);
    const int n = 2 + c % 5;
    Matrix cost(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) cost(i, j) = unif(rng);
    }
    const Marginal uniform = Marginal::uniform(n);
    const OtResult solved = solve_ot(cost, uniform, uniform, cfg);
    const TransportPlan rounded = round_to_polytope(solved.plan, uniform, uniform);
    const double solver_cost = rounded.entries().cwiseProduct(cost).sum();
    const double oracle_cost =
        assignment_oracle(cost).entries().cwiseProduct(cost).sum();
    report.worst = std::max(report.worst, std::abs(solver_cost - oracle_cost));
  }
  report.pass = report.worst <= report.threshold;
  return report;
}

SuiteReport minnorm_oracle_suite(int cases, std::uint64_t seed) {
  SuiteReport report{"minnorm", cases, 0.0, 1e-4, false};
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    Rng rng = make_rng(seed, "oracle.minnorm", c);
    const int count = 1 + c % 3;
    const int dim = 1 + (c / 3) % 3;
    std::vector<Vector> grads(count);
    for (Vector& g : grads) {
      g.resize(dim);
      for (Eigen::Index k = 0; k < dim; ++k) g[k] = unif(rng);
    }
    const double solver = min_norm_weights(grads).sq_norm;
    const double grid = min_norm_grid_oracle(grads, 0.01);
    report.worst = std::max(report.worst, solver - grid);
  }
  report.pass = report.worst <= report.threshold;
  return report;
}

SuiteReport hv_oracle_suite(int cases, std::uint64_t seed) {
  SuiteReport report{"hv", cases, 0.0, 2e-3, false};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    Rng rng = make_rng(seed, "oracle.hv", c);
    const int count = 1 + c % 10;
    std::vector<std::pair<double, double>> points(count);
    for (auto& p : points) p = {unif(rng), unif(rng)};
    const double exact = hypervolume_2d(points, {1.0, 1.0});
    const double grid = hypervolume_grid_oracle(points, {1.0, 1.0}, 1e-3);
    report.worst = std::max(report.worst, std::abs(exact - grid));
  }
  report.pass = report.worst <= report.threshold;
  return report;
}

SuiteReport grad_oracle_suite(int points_per_family, std::uint64_t seed) {
  SuiteReport report{"grad", 0, 0.0, 1e-5, false};

  std::vector<Problem> families;
  for (int variant : {1, 2, 3}) {
    ZdtSpec zdt;
    zdt.variant = variant;
    families.push_back(make_zdt_problem(zdt));
  }
  SynthFlSpec fl;  // small instance keeps the finite differencing quick
  fl.n_clients = 5;
  fl.feature_dim = 10;
  fl.classes = 4;
  fl.min_samples = 20;
  fl.max_samples = 40;
  fl.seed = seed;
  families.push_back(make_client_problem(gen_synthetic_fl(fl).data));
  FairnessSpec fair;
  fair.seed = seed;
  families.push_back(gen_fairness_problem(fair).make_problem());

  int case_index = 0;
  for (const Problem& problem : families) {
    for (int p = 0; p < points_per_family; ++p) {
      Rng rng = make_rng(seed, "oracle.grad", case_index++);
      const Vector theta = sample_gaussian(rng, problem.param_dim());
      report.worst =
          std::max(report.worst, finite_diff_check(problem, theta, 1e-6));
      ++report.cases;
    }
  }
  report.pass = report.worst <= report.threshold;
  return report;
}

bool run_oracle_check(const std::string& suite, std::ostream& out) {
  std::vector<SuiteReport> reports;
  if (suite == "ot" || suite == "all") reports.push_back(ot_oracle_suite());
  if (suite == "minnorm" || suite == "all") {
    reports.push_back(minnorm_oracle_suite());
  }
  if (suite == "hv" || suite == "all") reports.push_back(hv_oracle_suite());
  if (suite == "grad" || suite == "all") reports.push_back(grad_oracle_suite());
  if (reports.empty()) {
    throw std::invalid_argument("unknown suite '" + suite +
                                "' (valid: ot, minnorm, hv, grad, all)");
  }
  bool all_pass = true;
  for (const SuiteReport& r : reports) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite << ": " << r.cases
        << " cases, worst deviation " << r.worst << " (threshold "
        << r.threshold << ")\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass;
}

}  // namespace most
