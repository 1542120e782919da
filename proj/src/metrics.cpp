#include "most/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace most {

double hypervolume_2d(const std::vector<std::pair<double, double>>& points,
                      std::pair<double, double> ref) {
  std::vector<std::pair<double, double>> inside;
  for (const auto& p : points) {
    if (!std::isfinite(p.first) || !std::isfinite(p.second)) {
      throw std::invalid_argument("hypervolume_2d: points must be finite");
    }
    if (p.first <= ref.first && p.second <= ref.second) inside.push_back(p);
  }
  if (inside.empty()) return 0.0;
  std::sort(inside.begin(), inside.end());
  double area = 0.0;
  double staircase = ref.second;  // running minimum of f2 seen so far
  for (std::size_t k = 0; k < inside.size(); ++k) {
    const double next_f1 =
        k + 1 < inside.size() ? inside[k + 1].first : ref.first;
    staircase = std::min(staircase, inside[k].second);
    area += (next_f1 - inside[k].first) * (ref.second - staircase);
  }
  return area;
}

double hypervolume(const std::vector<Vector>& points, const Vector& ref) {
  if (ref.size() != 2) {
    throw std::invalid_argument("hypervolume: only 2 objectives supported");
  }
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(points.size());
  for (const Vector& p : points) {
    if (p.size() != 2) {
      throw std::invalid_argument("hypervolume: only 2 objectives supported");
    }
    pairs.emplace_back(p[0], p[1]);
  }
  return hypervolume_2d(pairs, {ref[0], ref[1]});
}

double symmetric_kl(const TransportPlan& a, const TransportPlan& b,
                    double smoothing) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("symmetric_kl: shape mismatch");
  }
  Matrix p = a.entries().array() + smoothing;
  Matrix q = b.entries().array() + smoothing;
  p /= p.sum();
  q /= q.sum();
  double kl_pq = 0.0, kl_qp = 0.0;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      kl_pq += p(i, j) * std::log(p(i, j) / q(i, j));
      kl_qp += q(i, j) * std::log(q(i, j) / p(i, j));
    }
  }
  return 0.5 * (kl_pq + kl_qp);
}

double sparsity_fraction(const TransportPlan& plan, double zero_tol) {
  if (zero_tol < 0.0) {
    throw std::invalid_argument("sparsity_fraction: zero_tol must be >= 0");
  }
  const Eigen::Index total = plan.rows() * plan.cols();
  const Eigen::Index zeros = (plan.entries().array() < zero_tol).count();
  return static_cast<double>(zeros) / static_cast<double>(total);
}

OracleAverage oracle_vs_average(const Matrix& loss_matrix) {
  if (loss_matrix.size() == 0 || !loss_matrix.allFinite()) {
    throw std::invalid_argument("oracle_vs_average: matrix must be finite and nonempty");
  }
  OracleAverage out;
  out.oracle_mean = loss_matrix.rowwise().minCoeff().mean();
  out.average_mean = loss_matrix.mean();
  return out;
}

std::vector<std::pair<double, double>> quantile_perf(
    const std::vector<double>& values, const std::vector<double>& quantiles) {
  if (values.empty()) {
    throw std::invalid_argument("quantile_perf: empty values");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("quantile_perf: values must be finite");
    }
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(quantiles.size());
  for (double q : quantiles) {
    if (!(q > 0.0) || q > 1.0) {
      throw std::invalid_argument("quantile_perf: quantiles must be in (0, 1]");
    }
    const auto take = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(sorted.size())));
    double sum = 0.0;
    for (std::size_t k = 0; k < take; ++k) sum += sorted[k];
    out.emplace_back(q, sum / static_cast<double>(take));
  }
  return out;
}

}  // namespace most
