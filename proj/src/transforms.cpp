#include "fedcodec/transforms.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "fedcodec/rng.hpp"

namespace fedcodec {

size_t padded_length(size_t d) { return std::bit_ceil(d < 1 ? size_t{1} : d); }

void fwht_orthonormal(std::span<double> v) {
  size_t n = v.size();
  if (!std::has_single_bit(n))
    throw std::invalid_argument("fwht: length must be a power of two");
  for (size_t len = 1; len < n; len <<= 1) {
    for (size_t i = 0; i < n; i += 2 * len) {
      for (size_t j = i; j < i + len; ++j) {
        double a = v[j];
        double b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& x : v) x *= scale;
}

double rademacher_sign(uint64_t seed, uint64_t index) {
  return (hash_u64(seed, index) >> 63) ? -1.0 : 1.0;
}

std::vector<double> randomized_hadamard(std::span<const double> u,
                                        uint64_t seed) {
  std::vector<double> y(padded_length(u.size()), 0.0);
  for (size_t i = 0; i < u.size(); ++i)
    y[i] = u[i] * rademacher_sign(seed, i);
  fwht_orthonormal(y);
  return y;
}

std::vector<double> inverse_hadamard(std::span<const double> y, uint64_t seed,
                                     size_t original_d) {
  if (y.size() != padded_length(original_d))
    throw std::invalid_argument("inverse_hadamard: length is not the padded "
                                "power of two for original_d");
  std::vector<double> v(y.begin(), y.end());
  fwht_orthonormal(v);
  v.resize(original_d);
  for (size_t i = 0; i < v.size(); ++i) v[i] *= rademacher_sign(seed, i);
  return v;
}

std::pair<std::vector<double>, double> normalize(std::span<const double> u) {
  double sq = 0.0;
  for (double x : u) sq += x * x;
  double norm = std::sqrt(sq);
  std::vector<double> v(u.size(), 0.0);
  if (norm > 0.0)
    for (size_t i = 0; i < u.size(); ++i) v[i] = u[i] / norm;
  return {std::move(v), norm};
}

}  // namespace fedcodec
