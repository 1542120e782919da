#ifndef MOST_DRIVER_HPP_
#define MOST_DRIVER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "most/descent.hpp"
#include "most/parallel.hpp"
#include "most/transport.hpp"
#include "most/types.hpp"

namespace most {

enum class Method { kMost, kLinearization, kMgdaRestarts };

std::string method_name(Method method);
Method parse_method(const std::string& name);

/// Objective augmentation for the few-objective regime: add Dirichlet-mixed
/// interpolations until n_prime objectives exist.
struct ExtensionSpec {
  int n_prime = 0;
  double concentration = 1.0;
};

struct RunConfig {
  Method method = Method::kMost;
  int m = 5;
  int T = 100;
  int K = 1;
  double eta = 0.005;
  double tau = 0.1;
  double init_stddev = 0.1;
  double minibatch_fraction = 1.0;  // 1 = full batch
  std::uint64_t seed = 0;
  CurriculumSchedule curriculum;
  OtConfig ot;
  MinNormConfig minnorm;
  std::optional<ExtensionSpec> extend;
  // Forces uniform weights in the linearization baseline (plain empirical
  // risk minimization when m = 1).
  bool uniform_weights = false;
  Exec exec = Exec::kOpenMP;

  void validate() const;
};

/// Zero threshold used for the recorded sparsity statistic.
inline constexpr double kSparsityZeroTol = 1e-8;

struct IterationRecord {
  int iter = 0;          // 1-based outer iteration
  Matrix losses;         // n x m, evaluated before this iteration's update
  double potential = 0.0;        // <Gamma, losses> + tau R(Gamma)
  double sparsity = 0.0;
  double regularizer_value = 0.0;
  double diversity = 0.0;
  double plan_kl = 0.0;          // symmetric KL against the previous plan
  Vector d_sq_norms;             // per solution, last inner step
  double max_contract_violation = 0.0;
  double wall_seconds = 0.0;
};

struct RunRecord {
  std::vector<IterationRecord> iterations;
  Matrix initial_losses;
  SolutionSet final_solutions;
  TransportPlan final_plan = TransportPlan(Matrix::Ones(1, 1));
  bool aborted = false;
  std::string abort_reason;
};

/// Field-by-field equality of the numeric payload; wall-clock times are the
/// one nondeterministic field and are ignored.
bool records_match(const RunRecord& a, const RunRecord& b);

/// n x m losses L_i(theta_j); the basic data-parallel kernel.
Matrix loss_matrix(const Problem& problem, const std::vector<Vector>& solutions,
                   Exec exec = Exec::kOpenMP);

/// Alternating optimization: solve the regularized transport problem for the
/// current losses, then run K reweighted multi-gradient steps per solution.
RunRecord run_most(const Problem& problem, const RunConfig& cfg);

/// Linearization (random convex combinations) and repeated plain MGDA, with
/// the identical record schema.
RunRecord run_baseline(const Problem& problem, const RunConfig& cfg);

RunRecord run(const Problem& problem, const RunConfig& cfg);

Problem extend_objectives(const Problem& problem, int n_prime,
                          double concentration, std::uint64_t seed);

/// Mixture weights of an extended problem ((n' - n) x n), or nullptr.
const Matrix* extension_weights(const Problem& problem);

/// Per objective, the solution with the smallest loss; ties go to the
/// lowest solution index.
std::vector<int> select_best_per_objective(const Matrix& loss_matrix);

}  // namespace most

#endif  // MOST_DRIVER_HPP_
