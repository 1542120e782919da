#include <doctest.h>

#include <sstream>

#include "most/problems.hpp"
#include "most/rng.hpp"

using namespace most;

TEST_CASE("zdt values at the classic corner points") {
  ZdtSpec spec;
  spec.squash = false;

  SUBCASE("zdt1") {
    spec.variant = 1;
    Vector x = Vector::Zero(30);
    CHECK(zdt_eval(spec, 0, x) == doctest::Approx(0.0));
    CHECK(zdt_eval(spec, 1, x) == doctest::Approx(1.0));

    x[0] = 1.0;
    CHECK(zdt_eval(spec, 0, x) == doctest::Approx(1.0));
    CHECK(zdt_eval(spec, 1, x) == doctest::Approx(0.0));

    x.setOnes();
    CHECK(zdt_eval(spec, 0, x) == doctest::Approx(1.0));
    CHECK(zdt_eval(spec, 1, x) ==
          doctest::Approx(10.0 * (1.0 - std::sqrt(0.1))));
  }

  SUBCASE("zdt2 concave front endpoints") {
    spec.variant = 2;
    Vector x = Vector::Zero(30);
    CHECK(zdt_eval(spec, 1, x) == doctest::Approx(1.0));
    x[0] = 1.0;
    CHECK(zdt_eval(spec, 1, x) == doctest::Approx(0.0));
  }

  SUBCASE("zdt3 sine term") {
    spec.variant = 3;
    Vector x = Vector::Zero(30);
    x[0] = 0.5;
    // g = 1, f2 = 1 - sqrt(0.5) - 0.5 sin(5 pi)
    CHECK(zdt_eval(spec, 1, x) == doctest::Approx(1.0 - std::sqrt(0.5)));
  }
}

TEST_CASE("zdt objectives are pure functions of theta") {
  const Problem p = make_zdt_problem(ZdtSpec{});
  Rng rng = make_rng(3, "problems.pure");
  const Vector theta = sample_gaussian(rng, 30);
  const double first = p.eval(0, theta);
  const double second = p.eval(0, theta);
  CHECK(first == second);
  CHECK(p.eval(1, theta) == p.eval(1, theta));
}

TEST_CASE("zdt analytic gradients match finite differences") {
  for (int variant : {1, 2, 3}) {
    ZdtSpec spec;
    spec.variant = variant;
    const Problem p = make_zdt_problem(spec);
    for (int rep = 0; rep < 5; ++rep) {
      Rng rng = make_rng(rep, "problems.zdt_fd");
      const Vector theta = sample_gaussian(rng, 30);
      CHECK(finite_diff_check(p, theta, 1e-6) < 1e-5);
    }
  }
}

TEST_CASE("synthetic federated data") {
  SynthFlSpec spec;
  spec.n_clients = 6;
  spec.feature_dim = 12;
  spec.classes = 5;
  spec.min_samples = 30;
  spec.max_samples = 60;
  spec.seed = 17;

  SUBCASE("deterministic given the seed") {
    const SynthFlData a = gen_synthetic_fl(spec);
    const SynthFlData b = gen_synthetic_fl(spec);
    REQUIRE(a.data->n_clients() == b.data->n_clients());
    for (int k = 0; k < a.data->n_clients(); ++k) {
      CHECK(a.data->clients()[k].train.x == b.data->clients()[k].train.x);
      CHECK(a.data->clients()[k].train.y == b.data->clients()[k].train.y);
    }
    CHECK(a.true_weights[0] == b.true_weights[0]);
  }

  SUBCASE("splits follow 6:2:2") {
    const SynthFlData d = gen_synthetic_fl(spec);
    for (const ClientData& c : d.data->clients()) {
      const int total = c.train.size() + c.val.size() + c.test.size();
      const SplitCounts expect = split_counts(total);
      CHECK(c.train.size() == expect.train);
      CHECK(c.val.size() == expect.val);
      CHECK(c.test.size() == expect.test);
    }
  }

  SUBCASE("generating model beats the zero model on its own client") {
    const SynthFlData d = gen_synthetic_fl(spec);
    const Vector zero = Vector::Zero(d.data->param_dim());
    for (int k = 0; k < d.data->n_clients(); ++k) {
      Vector packed(d.data->param_dim());
      Eigen::Map<Matrix>(packed.data(), spec.classes, spec.feature_dim) =
          d.true_weights[k];
      packed.tail(spec.classes) = d.true_bias[k];
      const double truth = d.data->split_loss(d.data->clients()[k].train, packed);
      const double baseline =
          d.data->split_loss(d.data->clients()[k].train, zero);
      CHECK(truth < baseline);
    }
  }

  SUBCASE("heterogeneity grows with rho at the default scale") {
    SynthFlSpec low;  // 30 clients, 60 features, 10 classes
    low.seed = 17;
    SynthFlSpec high = low;
    high.rho1 = 1.0;
    high.rho2 = 1.0;
    const double tv_low = gen_synthetic_fl(low).data->label_distribution_tv();
    const double tv_high = gen_synthetic_fl(high).data->label_distribution_tv();
    CHECK(tv_high > tv_low);
  }

  SUBCASE("gradients pass finite differences") {
    const Problem p = make_client_problem(gen_synthetic_fl(spec).data);
    for (int rep = 0; rep < 3; ++rep) {
      Rng rng = make_rng(rep, "problems.fl_fd");
      const Vector theta = sample_gaussian(rng, p.param_dim(), 0.0, 0.5);
      CHECK(finite_diff_check(p, theta, 1e-6) < 1e-5);
    }
  }

  SUBCASE("minibatched views are deterministic subsets") {
    const auto data = gen_synthetic_fl(spec).data;
    const Problem p = make_client_problem(data);
    const auto mb1 = p.family()->minibatched(0.5, 99);
    const auto mb2 = p.family()->minibatched(0.5, 99);
    REQUIRE(mb1);
    Rng rng = make_rng(0, "problems.mb");
    const Vector theta = sample_gaussian(rng, p.param_dim(), 0.0, 0.1);
    CHECK(mb1->eval(0, theta, nullptr) == mb2->eval(0, theta, nullptr));
    // A different seed picks a different subset (loss almost surely moves).
    const auto mb3 = p.family()->minibatched(0.5, 100);
    CHECK(mb1->eval(0, theta, nullptr) != mb3->eval(0, theta, nullptr));
  }
}

TEST_CASE("fairness problem") {
  FairnessSpec spec;
  spec.seed = 5;
  const FairnessData data = gen_fairness_problem(spec);
  const Problem p = data.make_problem();

  SUBCASE("zero parameters have zero covariance objective") {
    CHECK(p.eval(1, Vector::Zero(3)) == doctest::Approx(0.0));
  }

  SUBCASE("independent sensitive attribute kills the fairness objective") {
    FairnessSpec indep = spec;
    indep.sensitive_correlation = 0.0;
    indep.n_samples = 40000;
    const FairnessData big = gen_fairness_problem(indep);
    // Covariance direction shrinks like 1/sqrt(N) when z is independent.
    CHECK(big.covariance_direction().norm() < 0.1);
    const FairnessData corr = gen_fairness_problem(spec);
    CHECK(corr.covariance_direction().norm() >
          5.0 * big.covariance_direction().norm());
  }

  SUBCASE("gradients pass finite differences") {
    for (int rep = 0; rep < 5; ++rep) {
      Rng rng = make_rng(rep, "problems.fair_fd");
      const Vector theta = sample_gaussian(rng, 3);
      CHECK(finite_diff_check(p, theta, 1e-6) < 1e-5);
    }
  }
}

TEST_CASE("finite_diff_check is exact for quadratics") {
  // 0.5 ||theta||^2 has constant curvature: central differences are exact
  // up to roundoff.
  class Quad : public ObjectiveFamily {
   public:
    int n_objectives() const override { return 1; }
    int param_dim() const override { return 4; }
    double eval(int, const Vector& theta, Vector* grad) const override {
      if (grad) *grad = theta;
      return 0.5 * theta.squaredNorm();
    }
  };
  Problem p(std::make_shared<Quad>());
  Rng rng = make_rng(0, "problems.quad_fd");
  const Vector theta = sample_gaussian(rng, 4);
  CHECK(finite_diff_check(p, theta, 1e-5) < 1e-9);
  CHECK_THROWS_AS(finite_diff_check(p, theta, 0.0), std::invalid_argument);
}

TEST_CASE("dataset export and reload round trip") {
  SynthFlSpec spec;
  spec.n_clients = 3;
  spec.feature_dim = 4;
  spec.classes = 3;
  spec.min_samples = 20;
  spec.max_samples = 30;
  spec.seed = 23;
  const auto data = gen_synthetic_fl(spec).data;

  std::stringstream file;
  export_dataset(file, *data);
  const auto reloaded = load_dataset(file, "roundtrip", 23);

  REQUIRE(reloaded->n_clients() == data->n_clients());
  CHECK(reloaded->classes() == data->classes());
  CHECK(reloaded->feature_dim() == data->feature_dim());
  Rng rng = make_rng(1, "problems.roundtrip");
  const Vector theta = sample_gaussian(rng, data->param_dim(), 0.0, 0.3);
  for (int k = 0; k < data->n_clients(); ++k) {
    CHECK(reloaded->clients()[k].train.size() == data->clients()[k].train.size());
    CHECK(reloaded->split_loss(reloaded->clients()[k].train, theta) ==
          doctest::Approx(data->split_loss(data->clients()[k].train, theta))
              .epsilon(1e-12));
  }

  SUBCASE("fairness export is parseable too") {
    FairnessSpec fair;
    fair.n_samples = 50;
    std::stringstream ff;
    export_dataset(ff, gen_fairness_problem(fair));
    const auto loaded = load_dataset(ff, "fair");
    CHECK(loaded->n_clients() == 1);
    CHECK(loaded->feature_dim() == 2);
    CHECK(loaded->classes() == 2);
  }

  SUBCASE("malformed files are rejected") {
    std::stringstream empty;
    CHECK_THROWS_AS(load_dataset(empty, "x"), std::runtime_error);
    std::stringstream bad("clientz f0 label\n0 0.5 0\n");
    CHECK_THROWS_AS(load_dataset(bad, "x"), std::runtime_error);
  }
}
