#ifndef MOST_EXPERIMENT_HPP_
#define MOST_EXPERIMENT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "most/config.hpp"
#include "most/driver.hpp"

namespace most {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Column order is fixed: iter, potential, sparsity, diversity, plan_kl,
/// mean_loss, oracle_loss, then one d_sq_norm column per solution.
void write_metrics_csv(std::ostream& out, const RunRecord& record);

struct MetricsRow {
  int iter = 0;
  double potential = 0.0;
  double sparsity = 0.0;
  double diversity = 0.0;
  double plan_kl = 0.0;
  double mean_loss = 0.0;
  double oracle_loss = 0.0;
  std::vector<double> d_sq_norms;
};
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

struct ExperimentOutcome {
  int exit_code = 0;
  std::vector<std::string> files_written;
  RunRecord record;
};

/// Builds the problem, runs the configured method, and writes the requested
/// artifacts plus a run manifest into the output directory. A numeric abort
/// still flushes the partial record but exits nonzero.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

}  // namespace most

#endif  // MOST_EXPERIMENT_HPP_
