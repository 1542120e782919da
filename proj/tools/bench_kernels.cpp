// Times the data-parallel kernels against their serial reference and checks
// the outputs agree bit for bit.

#include <chrono>
#include <cstdio>

#include "most/driver.hpp"
#include "most/parallel.hpp"
#include "most/problems.hpp"
#include "most/rng.hpp"

using namespace most;

namespace {

double time_seconds(const auto& fn, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const std::chrono::duration<double> dt =
      std::chrono::steady_clock::now() - start;
  return dt.count() / reps;
}

}  // namespace

int main() {
  SynthFlSpec spec;
  spec.n_clients = 30;
  spec.min_samples = 300;
  spec.max_samples = 500;
  spec.seed = 7;
  const auto data = gen_synthetic_fl(spec).data;
  const Problem problem = make_client_problem(data);

  const int m = 8;
  std::vector<Vector> solutions(m);
  for (int j = 0; j < m; ++j) {
    Rng rng = make_rng(7, "bench.init", j);
    solutions[j] = sample_gaussian(rng, problem.param_dim(), 0.0, 0.1);
  }

  std::printf("threads: %d\n", worker_threads());

  // Loss matrix kernel
  const Matrix serial = loss_matrix(problem, solutions, Exec::kSerial);
  const Matrix parallel = loss_matrix(problem, solutions, Exec::kOpenMP);
  const bool losses_match = serial == parallel;
  const double t_serial = time_seconds(
      [&] { loss_matrix(problem, solutions, Exec::kSerial); }, 5);
  const double t_parallel = time_seconds(
      [&] { loss_matrix(problem, solutions, Exec::kOpenMP); }, 5);
  std::printf("loss_matrix   serial %8.2f ms   openmp %8.2f ms   speedup %.2fx   bitwise %s\n",
              1e3 * t_serial, 1e3 * t_parallel, t_serial / t_parallel,
              losses_match ? "equal" : "DIFFER");

  // Full MosT iteration sweep
  RunConfig cfg;
  cfg.m = m;
  cfg.T = 10;
  cfg.K = 2;
  cfg.eta = 0.01;
  cfg.seed = 7;
  cfg.exec = Exec::kSerial;
  const auto run_serial = [&] { return run_most(problem, cfg); };
  RunConfig cfg_omp = cfg;
  cfg_omp.exec = Exec::kOpenMP;
  const auto run_parallel = [&] { return run_most(problem, cfg_omp); };

  const RunRecord rec_serial = run_serial();
  const RunRecord rec_parallel = run_parallel();
  const bool runs_match = records_match(rec_serial, rec_parallel);
  const double r_serial = time_seconds([&] { run_serial(); }, 2);
  const double r_parallel = time_seconds([&] { run_parallel(); }, 2);
  std::printf("run_most(T=10) serial %8.2f ms   openmp %8.2f ms   speedup %.2fx   records %s\n",
              1e3 * r_serial, 1e3 * r_parallel, r_serial / r_parallel,
              runs_match ? "equal" : "DIFFER");

  return losses_match && runs_match ? 0 : 1;
}
