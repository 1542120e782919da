#ifndef MOST_RNG_HPP_
#define MOST_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

#include "most/types.hpp"

namespace most {

/// Mixes a root seed with a component name and index so that adding a new
/// consumer never perturbs another component's stream.
std::uint64_t derive_seed(std::uint64_t root, std::string_view component,
                          std::uint64_t index = 0);

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t root, std::string_view component,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(root, component, index));
}

Vector sample_gaussian(Rng& rng, Eigen::Index dim, double mean = 0.0,
                       double stddev = 1.0);

/// Dirichlet(concentration * 1_dim); concentration must be positive.
Vector sample_dirichlet(Rng& rng, Eigen::Index dim, double concentration);

/// Uniform sample from the probability simplex (Dirichlet with unit
/// concentration).
inline Vector sample_simplex(Rng& rng, Eigen::Index dim) {
  return sample_dirichlet(rng, dim, 1.0);
}

}  // namespace most

#endif  // MOST_RNG_HPP_
