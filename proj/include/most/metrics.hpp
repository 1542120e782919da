#ifndef MOST_METRICS_HPP_
#define MOST_METRICS_HPP_

#include <utility>
#include <vector>

#include "most/types.hpp"

namespace most {

/// Area weakly dominated by the points and bounded by ref, computed by an
/// exact staircase sweep. Points outside the reference box contribute
/// nothing.
double hypervolume_2d(const std::vector<std::pair<double, double>>& points,
                      std::pair<double, double> ref);

/// General-signature wrapper; only two objectives are supported.
double hypervolume(const std::vector<Vector>& points, const Vector& ref);

/// (KL(P||Q) + KL(Q||P)) / 2 over the flattened plans after additive
/// smoothing and renormalization.
double symmetric_kl(const TransportPlan& a, const TransportPlan& b,
                    double smoothing = 1e-12);

/// Fraction of entries strictly below zero_tol.
double sparsity_fraction(const TransportPlan& plan, double zero_tol = 1e-8);

struct OracleAverage {
  double oracle_mean = 0.0;   // mean over rows of the row minimum
  double average_mean = 0.0;  // mean over all entries
};
OracleAverage oracle_vs_average(const Matrix& loss_matrix);

/// For each quantile q, the mean of the worst ceil(q * n) values (values
/// sorted ascending; callers pre-negate when larger is better).
std::vector<std::pair<double, double>> quantile_perf(
    const std::vector<double>& values, const std::vector<double>& quantiles);

}  // namespace most

#endif  // MOST_METRICS_HPP_
