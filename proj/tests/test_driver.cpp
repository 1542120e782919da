#include <doctest.h>

#include "most/driver.hpp"
#include "most/problems.hpp"
#include "most/rng.hpp"
#include "support/quadratic.hpp"

using namespace most;

TEST_CASE("single solution, single objective reduces to gradient descent") {
  auto family = std::make_shared<testing::QuadraticFamily>(
      std::vector<Vector>{Vector::Zero(3)},
      std::vector<Vector>{Vector::Ones(3)});
  const Problem p{family};

  RunConfig cfg;
  cfg.method = Method::kMost;
  cfg.m = 1;
  cfg.T = 8;
  cfg.K = 2;
  cfg.eta = 0.25;
  cfg.tau = 0.1;
  cfg.seed = 3;
  const RunRecord record = run_most(p, cfg);
  REQUIRE(!record.aborted);
  REQUIRE(record.iterations.size() == 8);

  // Hand-rolled gradient descent from the same init.
  Rng rng = make_rng(cfg.seed, "init", 0);
  Vector theta = sample_gaussian(rng, 3, 0.0, cfg.init_stddev);
  for (int t = 0; t < cfg.T * cfg.K; ++t) theta -= cfg.eta * theta;
  CHECK((record.final_solutions.params[0] - theta).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  // The forced 1x1 plan is [[1.0]].
  CHECK(record.final_plan.entries()(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("T=0 records only the initial state") {
  const Problem p = testing::make_quadratic_problem(3, 2, 1);
  RunConfig cfg;
  cfg.m = 2;
  cfg.T = 0;
  const RunRecord record = run_most(p, cfg);
  CHECK(record.iterations.empty());
  CHECK(record.initial_losses.rows() == 3);
  CHECK(record.final_solutions.size() == 2);
}

TEST_CASE("potential is non-increasing on a convex quadratic run") {
  const Problem p = testing::make_quadratic_problem(6, 4, 2);
  RunConfig cfg;
  cfg.m = 3;
  cfg.T = 40;
  cfg.K = 1;
  cfg.eta = 0.25 / testing::quadratic_curvature(p);
  cfg.tau = 0.1;
  cfg.seed = 11;
  const RunRecord record = run_most(p, cfg);
  REQUIRE(!record.aborted);
  for (std::size_t t = 1; t < record.iterations.size(); ++t) {
    CHECK(record.iterations[t].potential <=
          record.iterations[t - 1].potential + 1e-6);
  }
}

TEST_CASE("extend_objectives") {
  const Problem base = testing::make_quadratic_problem(2, 3, 7);
  const Problem extended = extend_objectives(base, 10, 0.5, 3);
  CHECK(extended.n_objectives() == 10);

  const Matrix* weights = extension_weights(extended);
  REQUIRE(weights != nullptr);
  REQUIRE(weights->rows() == 8);

  SUBCASE("weights live on the simplex") {
    for (Eigen::Index r = 0; r < weights->rows(); ++r) {
      CHECK(weights->row(r).minCoeff() >= 0.0);
      CHECK(weights->row(r).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("values and gradients are the weighted combinations") {
    Rng rng = make_rng(0, "driver.extend");
    const Vector theta = sample_gaussian(rng, 3);
    for (int extra = 0; extra < 8; ++extra) {
      Vector grad, g0, g1;
      const double value = extended.eval(2 + extra, theta, &grad);
      const double expect = (*weights)(extra, 0) * base.eval(0, theta, &g0) +
                            (*weights)(extra, 1) * base.eval(1, theta, &g1);
      CHECK(value == doctest::Approx(expect).epsilon(1e-12));
      const Vector expect_grad =
          (*weights)(extra, 0) * g0 + (*weights)(extra, 1) * g1;
      CHECK((grad - expect_grad).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("first n objectives are untouched") {
    Rng rng = make_rng(1, "driver.extend2");
    const Vector theta = sample_gaussian(rng, 3);
    CHECK(extended.eval(0, theta) == base.eval(0, theta));
    CHECK(extended.eval(1, theta) == base.eval(1, theta));
  }

  CHECK_THROWS_AS(extend_objectives(base, 2, 0.5, 0), std::invalid_argument);
  CHECK(extension_weights(base) == nullptr);
}

TEST_CASE("linearization with one uniform solution is empirical risk minimization") {
  const Problem p = testing::make_quadratic_problem(4, 3, 13);
  RunConfig cfg;
  cfg.method = Method::kLinearization;
  cfg.m = 1;
  cfg.T = 10;
  cfg.K = 3;
  cfg.eta = 0.05;
  cfg.uniform_weights = true;
  cfg.seed = 5;
  const RunRecord record = run_baseline(p, cfg);

  Rng rng = make_rng(cfg.seed, "init", 0);
  Vector theta = sample_gaussian(rng, 3, 0.0, cfg.init_stddev);
  Vector grad, sum;
  for (int t = 0; t < cfg.T * cfg.K; ++t) {
    sum = Vector::Zero(3);
    for (int i = 0; i < 4; ++i) {
      p.eval(i, theta, &grad);
      sum += 0.25 * grad;
    }
    theta -= cfg.eta * sum;
  }
  CHECK((record.final_solutions.params[0] - theta).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("mgda restarts on a single objective is gradient descent") {
  auto family = std::make_shared<testing::QuadraticFamily>(
      std::vector<Vector>{Vector::Zero(2)},
      std::vector<Vector>{Vector::Ones(2)});
  const Problem p{family};
  RunConfig cfg;
  cfg.method = Method::kMgdaRestarts;
  cfg.m = 2;
  cfg.T = 6;
  cfg.K = 1;
  cfg.eta = 0.5;
  cfg.seed = 9;
  const RunRecord record = run_baseline(p, cfg);
  for (int j = 0; j < 2; ++j) {
    Rng rng = make_rng(cfg.seed, "init", j);
    Vector theta = sample_gaussian(rng, 2, 0.0, cfg.init_stddev);
    for (int t = 0; t < cfg.T; ++t) theta -= cfg.eta * theta;
    CHECK((record.final_solutions.params[j] - theta).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("identical seeds give identical records") {
  const Problem p = testing::make_quadratic_problem(5, 3, 21);
  for (Method method :
       {Method::kMost, Method::kLinearization, Method::kMgdaRestarts}) {
    RunConfig cfg;
    cfg.method = method;
    cfg.m = 3;
    cfg.T = 5;
    cfg.eta = 0.05;
    cfg.seed = 321;
    const RunRecord a = run(p, cfg);
    const RunRecord b = run(p, cfg);
    CHECK(records_match(a, b));
  }
}

TEST_CASE("baselines share the record schema") {
  const Problem p = testing::make_quadratic_problem(4, 2, 31);
  RunConfig cfg;
  cfg.m = 2;
  cfg.T = 3;
  cfg.eta = 0.05;
  for (Method method :
       {Method::kMost, Method::kLinearization, Method::kMgdaRestarts}) {
    cfg.method = method;
    const RunRecord record = run(p, cfg);
    REQUIRE(record.iterations.size() == 3);
    for (const IterationRecord& it : record.iterations) {
      CHECK(it.losses.rows() == 4);
      CHECK(it.losses.cols() == 2);
      CHECK(it.d_sq_norms.size() == 2);
      CHECK(std::isfinite(it.potential));
      CHECK(std::isfinite(it.diversity));
      CHECK(std::isfinite(it.plan_kl));
    }
    CHECK(record.final_plan.rows() == 4);
    CHECK(record.final_plan.cols() == 2);
  }
}

TEST_CASE("numeric failures abort with the partial record") {
  // Blows up at the third evaluation of objective 0.
  class Exploding : public ObjectiveFamily {
   public:
    int n_objectives() const override { return 2; }
    int param_dim() const override { return 2; }
    double eval(int i, const Vector& theta, Vector* grad) const override {
      if (grad) *grad = theta;
      if (i == 0 && theta.norm() > 1e3) {
        throw std::runtime_error("objective overflow");
      }
      return 0.5 * theta.squaredNorm();
    }
  };
  Problem p(std::make_shared<Exploding>());
  RunConfig cfg;
  cfg.m = 1;
  cfg.T = 50;
  cfg.eta = 10.0;  // far beyond 1/curvature: parameters diverge, then throw
  cfg.seed = 2;
  const RunRecord record = run_most(p, cfg);
  CHECK(record.aborted);
  CHECK(!record.abort_reason.empty());
  CHECK(record.iterations.size() < 50);
}

TEST_CASE("select_best_per_objective breaks ties toward lower index") {
  Matrix losses(3, 3);
  losses << 2, 1, 3,
            5, 5, 5,
            9, 4, 4;
  const std::vector<int> best = select_best_per_objective(losses);
  CHECK(best == std::vector<int>{1, 0, 1});
}
