#include "most/rng.hpp"

#include <stdexcept>

namespace most {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view component,
                          std::uint64_t index) {
  return root ^ splitmix64(fnv1a(component) + 0x632be59bd9b4e019ull * index);
}

Vector sample_gaussian(Rng& rng, Eigen::Index dim, double mean, double stddev) {
  std::normal_distribution<double> dist(mean, stddev);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = dist(rng);
  return v;
}

Vector sample_dirichlet(Rng& rng, Eigen::Index dim, double concentration) {
  if (dim < 1) throw std::invalid_argument("sample_dirichlet: dim must be >= 1");
  if (!(concentration > 0.0)) {
    throw std::invalid_argument("sample_dirichlet: concentration must be > 0");
  }
  std::gamma_distribution<double> gamma(concentration, 1.0);
  Vector v(dim);
  double total = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    v[i] = gamma(rng);
    total += v[i];
  }
  if (total <= 0.0) {
    // All gammas underflowed (tiny concentration); fall back to a one-hot.
    v.setZero();
    v[static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(dim))] = 1.0;
    return v;
  }
  return v / total;
}

}  // namespace most
