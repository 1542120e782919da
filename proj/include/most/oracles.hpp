#ifndef MOST_ORACLES_HPP_
#define MOST_ORACLES_HPP_

#include <string>
#include <utility>
#include <vector>

#include "most/types.hpp"

namespace most {

// Brute-force reference computations, independent of the solver paths they
// check, plus the randomized suites comparing the two.

/// min ||sum lambda_i g_i||^2 by dense simplex grid search at the given
/// step (supports 1 to 3 vectors).
double min_norm_grid_oracle(const std::vector<Vector>& gradients, double step);

/// Midpoint rectangle sweep over the reference box at the given resolution.
double hypervolume_grid_oracle(
    const std::vector<std::pair<double, double>>& points,
    std::pair<double, double> ref, double resolution);

struct SuiteReport {
  std::string suite;
  int cases = 0;
  double worst = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

SuiteReport ot_oracle_suite(int cases = 100, std::uint64_t seed = 20240901);
SuiteReport minnorm_oracle_suite(int cases = 100, std::uint64_t seed = 20240902);
SuiteReport hv_oracle_suite(int cases = 50, std::uint64_t seed = 20240903);
SuiteReport grad_oracle_suite(int points_per_family = 20,
                              std::uint64_t seed = 20240904);

/// Runs the named suite ("ot", "minnorm", "hv", "grad", or "all"), printing
/// one line per suite; returns true iff everything passed.
bool run_oracle_check(const std::string& suite, std::ostream& out);

}  // namespace most

#endif  // MOST_ORACLES_HPP_
