#include "most/experiment.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "most/metrics.hpp"
#include "most/parallel.hpp"

namespace most {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_metrics_csv(std::ostream& out, const RunRecord& record) {
  const int m = record.final_solutions.size();
  out << "iter,potential,sparsity,diversity,plan_kl,mean_loss,oracle_loss";
  for (int j = 1; j <= m; ++j) out << ",d_sq_norm_" << j;
  out << "\n";
  for (const IterationRecord& it : record.iterations) {
    const OracleAverage oa = oracle_vs_average(it.losses);
    out << it.iter << ',' << format_double(it.potential) << ','
        << format_double(it.sparsity) << ',' << format_double(it.diversity)
        << ',' << format_double(it.plan_kl) << ','
        << format_double(oa.average_mean) << ','
        << format_double(oa.oracle_mean);
    for (Eigen::Index j = 0; j < it.d_sq_norms.size(); ++j) {
      out << ',' << format_double(it.d_sq_norms[j]);
    }
    out << "\n";
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_metrics_csv: missing header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> fields;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      fields.push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (fields.size() < 7) {
      throw std::runtime_error("read_metrics_csv: short row");
    }
    MetricsRow row;
    row.iter = static_cast<int>(fields[0]);
    row.potential = fields[1];
    row.sparsity = fields[2];
    row.diversity = fields[3];
    row.plan_kl = fields[4];
    row.mean_loss = fields[5];
    row.oracle_loss = fields[6];
    row.d_sq_norms.assign(fields.begin() + 7, fields.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.cols(); ++j) {
      if (j) out << ',';
      out << format_double(plan.entries()(i, j));
    }
    out << "\n";
  }
}

json solutions_json(const ExperimentConfig& cfg, const BuiltProblem& built,
                    const RunRecord& record) {
  json doc;
  doc["method"] = method_name(cfg.run.method);
  doc["seed"] = cfg.run.seed;
  json params = json::array();
  for (const Vector& theta : record.final_solutions.params) {
    json vec = json::array();
    for (Eigen::Index k = 0; k < theta.size(); ++k) vec.push_back(theta[k]);
    params.push_back(std::move(vec));
  }
  doc["solutions"] = std::move(params);

  // Selection over the configured problem's objectives: validation losses
  // for client data, objective values otherwise.
  const Matrix selection_losses =
      built.clients
          ? built.clients->val_loss_matrix(record.final_solutions.params)
          : loss_matrix(built.problem, record.final_solutions.params,
                        cfg.run.exec);
  const std::vector<int> chosen = select_best_per_objective(selection_losses);
  json selection = json::array();
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    selection.push_back(
        {{"objective", i},
         {"solution", chosen[i]},
         {"loss", selection_losses(static_cast<Eigen::Index>(i), chosen[i])}});
  }
  doc["selection"] = std::move(selection);
  return doc;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentOutcome outcome;

  const BuiltProblem built = build_problem(cfg.problem, cfg.run.seed);
  outcome.record = run(built.problem, cfg.run);
  const RunRecord& record = outcome.record;

  std::error_code dir_err;
  fs::create_directories(cfg.output_dir, dir_err);

  bool io_ok = !dir_err;
  auto emit_file = [&](const std::string& name, const auto& writer) {
    const fs::path path = fs::path(cfg.output_dir) / name;
    std::ofstream out(path);
    if (!out) {
      io_ok = false;
      return;
    }
    writer(out);
    out.flush();
    if (out) {
      outcome.files_written.push_back(path.string());
    } else {
      io_ok = false;
    }
  };

  if (io_ok && cfg.emit.metrics) {
    emit_file("metrics.csv",
              [&](std::ostream& out) { write_metrics_csv(out, record); });
  }
  if (io_ok && cfg.emit.final_plan) {
    emit_file("final_plan.csv",
              [&](std::ostream& out) { write_plan_csv(out, record.final_plan); });
  }
  if (io_ok && cfg.emit.solutions) {
    emit_file("solutions.json", [&](std::ostream& out) {
      out << solutions_json(cfg, built, record).dump(2) << "\n";
    });
  }
  if (io_ok) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    emit_file("run_manifest.json", [&](std::ostream& out) {
      json manifest;
      manifest["config"] = json::parse(serialize_config(cfg));
      manifest["wall_seconds"] = wall;
      manifest["iterations_completed"] = record.iterations.size();
      manifest["aborted"] = record.aborted;
      if (record.aborted) manifest["abort_reason"] = record.abort_reason;
      manifest["worker_threads"] = worker_threads();
      out << manifest.dump(2) << "\n";
    });
  }

  outcome.exit_code = (record.aborted || !io_ok) ? 1 : 0;
  return outcome;
}

}  // namespace most
