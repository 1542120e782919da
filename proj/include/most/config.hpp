#ifndef MOST_CONFIG_HPP_
#define MOST_CONFIG_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "most/driver.hpp"
#include "most/problems.hpp"

namespace most {

struct ProblemSpec {
  enum class Type { kZdt, kSynthFl, kFairness, kExternal };
  Type type = Type::kZdt;
  ZdtSpec zdt;
  SynthFlSpec synth_fl;
  FairnessSpec fairness;
  std::string path;  // external dataset file
  // Generation seed; when unset the run seed is used, so re-seeding a run
  // re-draws the data as well.
  std::optional<std::uint64_t> seed;
};

struct MetricsSpec {
  std::optional<std::array<double, 2>> reference_point;
  std::vector<double> quantiles = {0.2, 0.4, 0.6, 0.8};
  double zero_tol = 1e-8;
};

struct EmitFlags {
  bool metrics = true;
  bool final_plan = true;
  bool solutions = true;
};

struct ExperimentConfig {
  ProblemSpec problem;
  RunConfig run;
  MetricsSpec metrics;
  std::string output_dir = "out";
  EmitFlags emit;
};

/// Parses and fully validates a JSON config document, filling defaults.
/// Unknown keys and constraint violations raise std::invalid_argument with
/// the offending key path.
ExperimentConfig parse_config(const std::string& text);

/// Serializes with every field materialized; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

struct BuiltProblem {
  Problem problem;
  // Set for client-data problems; enables validation-based selection and
  // accuracy metrics.
  std::shared_ptr<const MultiClientData> clients;
};

BuiltProblem build_problem(const ProblemSpec& spec, std::uint64_t run_seed);

}  // namespace most

#endif  // MOST_CONFIG_HPP_
