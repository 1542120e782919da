#include <doctest.h>

#include "most/metrics.hpp"
#include "most/oracles.hpp"
#include "most/rng.hpp"

using namespace most;

TEST_CASE("hypervolume_2d examples") {
  CHECK(hypervolume_2d({{0.25, 0.75}, {0.75, 0.25}}, {1.0, 1.0}) ==
        doctest::Approx(0.3125));
  CHECK(hypervolume_2d({{0.0, 0.0}}, {1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(hypervolume_2d({{2.0, 2.0}}, {1.0, 1.0}) == doctest::Approx(0.0));

  Vector ref3(3);
  ref3 << 1, 1, 1;
  CHECK_THROWS_AS(hypervolume({}, ref3), std::invalid_argument);
}

TEST_CASE("hypervolume_2d is monotone in the point set") {
  Rng rng = make_rng(51, "metrics.hv_mono");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<std::pair<double, double>> points;
    double last = 0.0;
    for (int k = 0; k < 8; ++k) {
      points.emplace_back(unif(rng), unif(rng));
      const double hv = hypervolume_2d(points, {1.0, 1.0});
      CHECK(hv >= last - 1e-15);
      last = hv;
    }
  }
}

TEST_CASE("hypervolume matches the grid sweep oracle") {
  Rng rng = make_rng(53, "metrics.hv_grid");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::pair<double, double>> points(1 + rep % 7);
    for (auto& p : points) p = {unif(rng), unif(rng)};
    const double exact = hypervolume_2d(points, {1.0, 1.0});
    const double grid = hypervolume_grid_oracle(points, {1.0, 1.0}, 1e-3);
    CHECK(std::abs(exact - grid) <= 2e-3);
  }
}

TEST_CASE("symmetric_kl examples") {
  const TransportPlan a(Matrix::Constant(1, 2, 0.5));
  Matrix bm(1, 2);
  bm << 0.25, 0.75;
  const TransportPlan b(bm);

  CHECK(symmetric_kl(a, a) == doctest::Approx(0.0));

  // Hand evaluation of 0.5 (KL(a||b) + KL(b||a)).
  const double expected =
      0.5 * (0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0) +
             0.25 * std::log(0.5) + 0.75 * std::log(1.5));
  CHECK(symmetric_kl(a, b) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(expected == doctest::Approx(0.1373265));

  // Disjoint supports stay finite under smoothing and far from zero.
  Matrix left(1, 2), right(1, 2);
  left << 1, 0;
  right << 0, 1;
  const double disjoint = symmetric_kl(TransportPlan(left), TransportPlan(right));
  CHECK(std::isfinite(disjoint));
  CHECK(disjoint > 20.0);

  CHECK_THROWS_AS(symmetric_kl(a, TransportPlan(Matrix::Ones(2, 2))),
                  std::invalid_argument);
}

TEST_CASE("symmetric_kl is symmetric, nonnegative, zero iff equal") {
  Rng rng = make_rng(57, "metrics.kl");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix x(3, 2), y(3, 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) {
        x(i, j) = unif(rng);
        y(i, j) = unif(rng);
      }
    }
    const TransportPlan a(x), b(y);
    const double ab = symmetric_kl(a, b);
    CHECK(ab == symmetric_kl(b, a));
    CHECK(ab >= 0.0);
    CHECK(symmetric_kl(a, a) == 0.0);
  }
}

TEST_CASE("sparsity_fraction examples") {
  Matrix half(2, 2);
  half << 0.5, 0, 0, 0.5;
  CHECK(sparsity_fraction(TransportPlan(half), 1e-8) == doctest::Approx(0.5));
  CHECK(sparsity_fraction(TransportPlan(Matrix::Constant(3, 3, 1.0 / 9))) ==
        doctest::Approx(0.0));

  Matrix partition = Matrix::Zero(6, 3);
  for (int i = 0; i < 6; ++i) partition(i, i % 3) = 1.0 / 6;
  CHECK(sparsity_fraction(TransportPlan(partition)) ==
        doctest::Approx(2.0 / 3.0));
}

TEST_CASE("oracle_vs_average examples") {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  const OracleAverage r = oracle_vs_average(m);
  CHECK(r.oracle_mean == doctest::Approx(1.0));
  CHECK(r.average_mean == doctest::Approx(1.5));
  CHECK(r.oracle_mean <= r.average_mean);

  const OracleAverage flat = oracle_vs_average(Matrix::Constant(3, 4, 2.5));
  CHECK(flat.oracle_mean == doctest::Approx(2.5));
  CHECK(flat.average_mean == doctest::Approx(2.5));

  Matrix row(1, 3);
  row << 3, 1, 2;
  const OracleAverage single = oracle_vs_average(row);
  CHECK(single.oracle_mean == doctest::Approx(1.0));
  CHECK(single.average_mean == doctest::Approx(2.0));
}

TEST_CASE("oracle never exceeds average") {
  Rng rng = make_rng(59, "metrics.oracle");
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int rep = 0; rep < 30; ++rep) {
    Matrix m(4, 3);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = unif(rng);
    }
    const OracleAverage r = oracle_vs_average(m);
    CHECK(r.oracle_mean <= r.average_mean + 1e-15);
  }
}

TEST_CASE("quantile_perf examples") {
  const std::vector<double> values = {10, 20, 30, 40, 50};
  const auto out = quantile_perf(values, {0.4, 1.0});
  CHECK(out[0].second == doctest::Approx(15.0));
  CHECK(out[1].second == doctest::Approx(30.0));

  const auto tiny = quantile_perf({5.0}, {0.2});
  CHECK(tiny[0].second == doctest::Approx(5.0));

  CHECK_THROWS_AS(quantile_perf({}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(quantile_perf({1.0}, {0.0}), std::invalid_argument);
}
