#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "most/config.hpp"
#include "most/experiment.hpp"
#include "most/oracles.hpp"
#include "most/problems.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::optional<std::uint64_t>& seed_override) {
  most::ExperimentConfig cfg = most::parse_config(read_file(config_path));
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed_override) cfg.run.seed = *seed_override;

  const most::ExperimentOutcome outcome = most::run_experiment(cfg);
  for (const std::string& f : outcome.files_written) {
    std::cout << "wrote " << f << "\n";
  }
  if (outcome.record.aborted) {
    std::cerr << "run aborted: " << outcome.record.abort_reason << "\n";
  }
  return outcome.exit_code;
}

int cmd_gen_data(const std::string& spec_path, const std::string& out_path) {
  most::ExperimentConfig cfg;
  // gen-data specs reuse the experiment "problem" block.
  cfg = most::parse_config(read_file(spec_path));
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  const std::uint64_t seed = cfg.problem.seed.value_or(cfg.run.seed);
  switch (cfg.problem.type) {
    case most::ProblemSpec::Type::kSynthFl: {
      most::SynthFlSpec spec = cfg.problem.synth_fl;
      spec.seed = seed;
      most::export_dataset(out, *most::gen_synthetic_fl(spec).data);
      break;
    }
    case most::ProblemSpec::Type::kFairness: {
      most::FairnessSpec spec = cfg.problem.fairness;
      spec.seed = seed;
      most::export_dataset(out, most::gen_fairness_problem(spec));
      break;
    }
    default:
      throw std::runtime_error(
          "gen-data supports synth_fl and fairness problems");
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-objective multi-solution transport"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite, spec_path, data_out;
  std::optional<std::uint64_t> seed_override;

  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "JSON config path")->required();
  run->add_option("--out", out_dir, "Output directory override");
  run->add_option("--seed", seed_override, "Seed override");

  CLI::App* oracle =
      app.add_subcommand("oracle-check", "Run a brute-force oracle suite");
  oracle->add_option("suite", suite, "ot | minnorm | hv | grad | all")
      ->required();

  CLI::App* gen = app.add_subcommand("gen-data", "Export a generated dataset");
  gen->add_option("spec", spec_path, "JSON spec with a problem block")
      ->required();
  gen->add_option("--out", data_out, "Output file")->default_val("dataset.txt");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed_override);
    if (oracle->parsed()) {
      return most::run_oracle_check(suite, std::cout) ? 0 : 1;
    }
    if (gen->parsed()) return cmd_gen_data(spec_path, data_out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
