#ifndef MOST_TYPES_HPP_
#define MOST_TYPES_HPP_

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace most {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Penalty value marking a marginal as a hard equality constraint.
inline constexpr double kHardMarginal = std::numeric_limits<double>::infinity();

/// A probability vector over objectives (alpha) or solutions (beta),
/// with a soft-constraint strength. penalty == kHardMarginal means the
/// marginal is enforced exactly.
class Marginal {
 public:
  Marginal(Vector weights, double penalty = kHardMarginal);

  static Marginal uniform(Eigen::Index dim);

  const Vector& weights() const { return weights_; }
  double penalty() const { return penalty_; }
  bool hard() const { return penalty_ == kHardMarginal; }
  Eigen::Index dim() const { return weights_.size(); }
  double operator[](Eigen::Index i) const { return weights_[i]; }

 private:
  Vector weights_;
  double penalty_;
};

/// Nonnegative n x m mass matrix matching objectives (rows) to solutions
/// (columns).
class TransportPlan {
 public:
  explicit TransportPlan(Matrix entries);

  const Matrix& entries() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  double total_mass() const { return entries_.sum(); }
  Vector row_marginal() const { return entries_.rowwise().sum(); }
  Vector col_marginal() const { return entries_.colwise().sum().transpose(); }
  Vector column(Eigen::Index j) const { return entries_.col(j); }

 private:
  Matrix entries_;
};

/// A family of differentiable objectives over a shared parameter space.
/// eval must be deterministic given (objective index, parameters) and
/// safe to call from multiple threads.
class ObjectiveFamily {
 public:
  virtual ~ObjectiveFamily() = default;

  virtual int n_objectives() const = 0;
  virtual int param_dim() const = 0;

  /// Returns the loss of objective i at theta; if grad is non-null it is
  /// resized and filled with the gradient.
  virtual double eval(int i, const Vector& theta, Vector* grad) const = 0;

  virtual std::string name() const { return "objective_family"; }
  virtual std::uint64_t seed() const { return 0; }

  /// Per-objective sample counts, when the objectives are data-backed.
  virtual std::vector<int> sample_counts() const { return {}; }

  /// A deterministic subsampled view of the family (for minibatch
  /// gradients); families without data return nullptr.
  virtual std::shared_ptr<const ObjectiveFamily> minibatched(
      double /*fraction*/, std::uint64_t /*seed*/) const {
    return nullptr;
  }
};

/// Value handle around an immutable ObjectiveFamily.
class Problem {
 public:
  explicit Problem(std::shared_ptr<const ObjectiveFamily> family);

  int n_objectives() const { return family_->n_objectives(); }
  int param_dim() const { return family_->param_dim(); }
  double eval(int i, const Vector& theta, Vector* grad = nullptr) const;
  std::string name() const { return family_->name(); }

  const std::shared_ptr<const ObjectiveFamily>& family() const {
    return family_;
  }

 private:
  std::shared_ptr<const ObjectiveFamily> family_;
};

/// The m parameter vectors being optimized, plus their update schedule.
struct SolutionSet {
  std::vector<Vector> params;
  double step_size = 0.0;
  int inner_steps = 1;

  SolutionSet() = default;
  SolutionSet(std::vector<Vector> params_, double step_size_, int inner_steps_);

  int size() const { return static_cast<int>(params.size()); }
};

}  // namespace most

#endif  // MOST_TYPES_HPP_
