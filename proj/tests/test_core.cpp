#include <doctest.h>

#include "most/core.hpp"
#include "most/rng.hpp"

using namespace most;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("make_uniform_marginal") {
  const Marginal m4 = make_uniform_marginal(4);
  CHECK(m4.dim() == 4);
  for (int i = 0; i < 4; ++i) CHECK(m4[i] == doctest::Approx(0.25));
  CHECK(m4.hard());

  const Marginal m1 = make_uniform_marginal(1);
  CHECK(m1[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(make_uniform_marginal(0), std::invalid_argument);
}

TEST_CASE("marginal validation") {
  Vector bad(2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(Marginal{bad}, std::invalid_argument);
  bad << -0.5, 1.5;
  CHECK_THROWS_AS(Marginal{bad}, std::invalid_argument);
  Vector ok(2);
  ok << 0.25, 0.75;
  CHECK_NOTHROW(Marginal(ok, 10.0));
}

TEST_CASE("validate_plan examples") {
  const Marginal uniform = Marginal::uniform(2);

  const FeasibilityReport exact =
      validate_plan(TransportPlan(mat2(0.5, 0, 0, 0.5)), uniform, uniform, 1e-9);
  CHECK(exact.feasible);
  CHECK(exact.max_row_deviation == doctest::Approx(0.0));
  CHECK(exact.max_col_deviation == doctest::Approx(0.0));

  const FeasibilityReport off =
      validate_plan(TransportPlan(mat2(0.6, 0, 0, 0.4)), uniform, uniform, 1e-9);
  CHECK(!off.feasible);
  CHECK(off.max_row_deviation == doctest::Approx(0.1));

  const FeasibilityReport product = validate_plan(
      TransportPlan(mat2(0.25, 0.25, 0.25, 0.25)), uniform, uniform, 1e-9);
  CHECK(product.feasible);

  CHECK_THROWS_AS(validate_plan(TransportPlan(Matrix::Ones(3, 2) / 6.0), uniform,
                                uniform, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("validate_plan is invariant under column permutation with uniform marginals") {
  Rng rng = make_rng(11, "core.perm");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix g(4, 3);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = unif(rng);
  }
  g /= g.sum();
  const Marginal alpha = Marginal::uniform(4);
  const Marginal beta = Marginal::uniform(3);
  const FeasibilityReport base = validate_plan(TransportPlan(g), alpha, beta);

  Matrix permuted(4, 3);
  permuted.col(0) = g.col(2);
  permuted.col(1) = g.col(0);
  permuted.col(2) = g.col(1);
  const FeasibilityReport perm = validate_plan(TransportPlan(permuted), alpha, beta);
  CHECK(base.max_row_deviation == doctest::Approx(perm.max_row_deviation));
  CHECK(base.max_col_deviation == doctest::Approx(perm.max_col_deviation));
  CHECK(base.min_entry == doctest::Approx(perm.min_entry));
}

TEST_CASE("plan_regularizer examples and range") {
  CHECK(plan_regularizer(TransportPlan(mat2(0.5, 0, 0, 0.5))) ==
        doctest::Approx(-1.0));
  CHECK(plan_regularizer(TransportPlan(mat2(0.25, 0.25, 0.25, 0.25))) ==
        doctest::Approx(-0.5));
  CHECK(plan_regularizer(TransportPlan(Matrix::Ones(1, 1))) ==
        doctest::Approx(-1.0));

  // For any plan with unit mass, R is within [-1, -1/m].
  Rng rng = make_rng(5, "core.reg");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const int m = 2 + static_cast<int>(rng() % 4);
    Matrix g(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) g(i, j) = unif(rng);
    }
    g /= g.sum();
    const double r = plan_regularizer(TransportPlan(g));
    CHECK(r >= -1.0 - 1e-12);
    CHECK(r <= -1.0 / m + 1e-12);
  }
}

TEST_CASE("plan_diversity examples") {
  CHECK(plan_diversity(TransportPlan(mat2(0.5, 0, 0, 0.5))) ==
        doctest::Approx(0.0));
  CHECK(plan_diversity(TransportPlan(mat2(0.25, 0.25, 0.25, 0.25))) ==
        doctest::Approx(2.0));

  Matrix g(3, 2);
  g << 0.3, 0, 0.3, 0, 0, 0.4;
  CHECK(plan_diversity(TransportPlan(g)) == doctest::Approx(0.0));

  bool degenerate = false;
  CHECK(plan_diversity(TransportPlan(Matrix::Ones(3, 1)), &degenerate) == 0.0);
  CHECK(degenerate);
}

TEST_CASE("plan_diversity ignores zero columns and is scale invariant") {
  Matrix g(3, 3);
  g << 0.2, 0.0, 0.1,
       0.1, 0.0, 0.2,
       0.0, 0.0, 0.4;
  const double base = plan_diversity(TransportPlan(g));

  Matrix scaled = g;
  scaled.col(2) *= 8.0;  // power of two: cosine unchanged bitwise
  CHECK(plan_diversity(TransportPlan(scaled)) == base);

  // The all-zero middle column contributes nothing.
  Matrix two(3, 2);
  two.col(0) = g.col(0);
  two.col(1) = g.col(2);
  CHECK(plan_diversity(TransportPlan(two)) == doctest::Approx(base));
}

TEST_CASE("partition plans are exactly the diversity-0 regularizer minimizers") {
  // n = 6, m = 3: one nonzero of 1/n per row, n/m per column.
  const int n = 6, m = 3;
  Matrix partition = Matrix::Zero(n, m);
  for (int i = 0; i < n; ++i) partition(i, i % m) = 1.0 / n;
  const TransportPlan plan(partition);
  CHECK(plan_diversity(plan) == doctest::Approx(0.0));
  CHECK(plan_regularizer(plan) == doctest::Approx(-1.0));

  // A feasible non-partition plan misses at least one of the two values.
  Matrix mixed = partition;
  mixed(0, 0) = 0.5 / n;
  mixed(0, 1) += 0.5 / n;
  mixed(1, 1) -= 0.5 / n;
  mixed(1, 0) += 0.5 / n;
  const TransportPlan spread(mixed);
  const bool diversity_zero = plan_diversity(spread) < 1e-12;
  const bool reg_minimal = plan_regularizer(spread) < -1.0 + 1e-12;
  CHECK(!(diversity_zero && reg_minimal));
}
