#ifndef MOST_PROBLEMS_HPP_
#define MOST_PROBLEMS_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "most/types.hpp"

namespace most {

// ---------------------------------------------------------------------------
// ZDT bi-objective benchmarks

struct ZdtSpec {
  int variant = 1;  // 1, 2, or 3
  int dim = 30;
  // Parameters live unconstrained; decision variables are the elementwise
  // logistic of theta, which keeps them inside (0, 1).
  bool squash = true;

  void validate() const;
};

/// Evaluates ZDT objective i (0 = f1, 1 = f2) with its analytic gradient.
double zdt_eval(const ZdtSpec& spec, int objective, const Vector& theta,
                Vector* grad = nullptr);

Problem make_zdt_problem(const ZdtSpec& spec, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Multi-client classification datasets (synthetic federated + external files)

struct ClientSplit {
  Matrix x;            // one sample per row
  Eigen::VectorXi y;   // class labels
  int size() const { return static_cast<int>(y.size()); }
};

struct ClientData {
  ClientSplit train, val, test;
};

/// 6:2:2 split sizes used everywhere a client's samples are partitioned.
struct SplitCounts {
  int train = 0, val = 0, test = 0;
};
SplitCounts split_counts(int n_samples);

/// A fixed set of clients, each an objective given by the multinomial
/// logistic loss of shared parameters on that client's training split.
class MultiClientData {
 public:
  MultiClientData(std::vector<ClientData> clients, int classes,
                  int feature_dim, std::string name, std::uint64_t seed);

  int n_clients() const { return static_cast<int>(clients_.size()); }
  int classes() const { return classes_; }
  int feature_dim() const { return feature_dim_; }
  int param_dim() const { return classes_ * (feature_dim_ + 1); }
  const std::vector<ClientData>& clients() const { return clients_; }
  const std::string& name() const { return name_; }
  std::uint64_t seed() const { return seed_; }

  double split_loss(const ClientSplit& split, const Vector& theta) const;
  double split_accuracy(const ClientSplit& split, const Vector& theta) const;
  /// Class probabilities, one sample per row.
  Matrix split_proba(const ClientSplit& split, const Vector& theta) const;

  /// n x m matrices over clients and candidate solutions.
  Matrix val_loss_matrix(const std::vector<Vector>& solutions) const;
  Matrix test_accuracy_matrix(const std::vector<Vector>& solutions) const;

  /// Mean symmetric KL between the two solutions' class-probability
  /// predictions over every client's test samples.
  double prediction_kl(const Vector& theta_a, const Vector& theta_b) const;

  /// Mean pairwise total-variation distance between client label
  /// distributions (train split), a data-heterogeneity summary.
  double label_distribution_tv() const;

 private:
  std::vector<ClientData> clients_;
  int classes_;
  int feature_dim_;
  std::string name_;
  std::uint64_t seed_;
};

/// Multinomial logistic loss of packed parameters (column-major W, then b)
/// averaged over the split; fills the gradient when grad is non-null.
double multinomial_logistic_loss(const ClientSplit& split, int classes,
                                 const Vector& theta, Vector* grad);

/// One objective per client: the logistic loss on its training split.
/// Supports deterministic minibatched views.
Problem make_client_problem(std::shared_ptr<const MultiClientData> data);

struct SynthFlSpec {
  double rho1 = 0.0;  // heterogeneity of the label-generating models
  double rho2 = 0.0;  // heterogeneity of the feature distributions
  int n_clients = 30;
  int feature_dim = 60;
  int classes = 10;
  int min_samples = 50;   // per-client counts are log-uniform in this range
  int max_samples = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthFlData {
  std::shared_ptr<const MultiClientData> data;
  // Ground-truth generating models, kept for inspection and tests.
  std::vector<Matrix> true_weights;
  std::vector<Vector> true_bias;
};

SynthFlData gen_synthetic_fl(const SynthFlSpec& spec);

// ---------------------------------------------------------------------------
// Fairness-accuracy trade-off problem

struct FairnessSpec {
  int n_samples = 2000;
  // Shift of p(z = 1) between the two classes; 0 makes the sensitive
  // attribute independent of the label.
  double sensitive_correlation = 0.6;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Two objectives over a shared linear model: the logistic classification
/// loss, and the squared covariance between the sensitive attribute and the
/// decision-boundary score (a smooth disparate-impact surrogate).
class FairnessData {
 public:
  FairnessData(Matrix x, Eigen::VectorXi y, Vector z, std::uint64_t seed);

  int n_samples() const { return static_cast<int>(y_.size()); }
  const Matrix& features() const { return x_; }  // augmented with a 1s column
  const Eigen::VectorXi& labels() const { return y_; }
  const Vector& sensitive() const { return z_; }
  const Vector& covariance_direction() const { return cov_dir_; }
  std::uint64_t seed() const { return seed_; }

  Problem make_problem() const;

 private:
  Matrix x_;
  Eigen::VectorXi y_;
  Vector z_;
  Vector cov_dir_;  // (1/N) sum_s (z_s - mean z) x_s
  std::uint64_t seed_;
};

FairnessData gen_fairness_problem(const FairnessSpec& spec);

// ---------------------------------------------------------------------------
// Gradient validation

/// Central-difference check; returns the max over objectives of
/// ||g_analytic - g_fd||_inf / (1 + ||g_fd||_inf).
double finite_diff_check(const Problem& problem, const Vector& theta,
                         double eps);

// ---------------------------------------------------------------------------
// Dataset text files: header row, then one sample per line with columns
// client, f0..f{d-1}, label[, sensitive].

void export_dataset(std::ostream& out, const MultiClientData& data);
void export_dataset(std::ostream& out, const FairnessData& data);

/// Loads a dataset file back into clients with the standard 6:2:2 split.
std::shared_ptr<const MultiClientData> load_dataset(std::istream& in,
                                                    const std::string& name,
                                                    std::uint64_t seed = 0);
std::shared_ptr<const MultiClientData> load_dataset_file(const std::string& path,
                                                         std::uint64_t seed = 0);

}  // namespace most

#endif  // MOST_PROBLEMS_HPP_
