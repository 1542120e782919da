#include "most/types.hpp"

#include <cmath>

namespace most {

namespace {

constexpr double kSimplexTol = 1e-12;

}  // namespace

Marginal::Marginal(Vector weights, double penalty)
    : weights_(std::move(weights)), penalty_(penalty) {
  if (weights_.size() < 1) {
    throw std::invalid_argument("Marginal: weight vector must have length >= 1");
  }
  if ((weights_.array() < 0.0).any()) {
    throw std::invalid_argument("Marginal: weights must be nonnegative");
  }
  if (std::abs(weights_.sum() - 1.0) > kSimplexTol) {
    throw std::invalid_argument("Marginal: weights must sum to 1");
  }
  if (!(penalty_ >= 0.0)) {
    throw std::invalid_argument("Marginal: penalty must be nonnegative");
  }
}

Marginal Marginal::uniform(Eigen::Index dim) {
  if (dim < 1) {
    throw std::invalid_argument("Marginal: dimension must be >= 1");
  }
  return Marginal(Vector::Constant(dim, 1.0 / static_cast<double>(dim)),
                  kHardMarginal);
}

TransportPlan::TransportPlan(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw std::invalid_argument("TransportPlan: empty matrix");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("TransportPlan: entries must be finite");
  }
  if ((entries_.array() < 0.0).any()) {
    throw std::invalid_argument("TransportPlan: entries must be nonnegative");
  }
}

Problem::Problem(std::shared_ptr<const ObjectiveFamily> family)
    : family_(std::move(family)) {
  if (!family_) {
    throw std::invalid_argument("Problem: null objective family");
  }
  if (family_->n_objectives() < 1 || family_->param_dim() < 1) {
    throw std::invalid_argument("Problem: degenerate dimensions");
  }
}

double Problem::eval(int i, const Vector& theta, Vector* grad) const {
  if (i < 0 || i >= n_objectives()) {
    throw std::out_of_range("Problem::eval: objective index out of range");
  }
  if (theta.size() != param_dim()) {
    throw std::invalid_argument("Problem::eval: parameter dimension mismatch");
  }
  double loss = family_->eval(i, theta, grad);
  if (grad && grad->size() != param_dim()) {
    throw std::runtime_error("Problem::eval: gradient length mismatch");
  }
  return loss;
}

SolutionSet::SolutionSet(std::vector<Vector> params_, double step_size_,
                         int inner_steps_)
    : params(std::move(params_)), step_size(step_size_),
      inner_steps(inner_steps_) {
  if (params.empty()) {
    throw std::invalid_argument("SolutionSet: need at least one solution");
  }
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("SolutionSet: step size must be positive");
  }
  if (inner_steps < 1) {
    throw std::invalid_argument("SolutionSet: inner step count must be >= 1");
  }
  for (const Vector& p : params) {
    if (!p.allFinite()) {
      throw std::invalid_argument("SolutionSet: parameters must be finite");
    }
  }
}

}  // namespace most
