#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fedcodec {

// Smallest power of two >= d (and >= 1).
size_t padded_length(size_t d);

// In-place orthonormal Walsh-Hadamard transform; v.size() must be a power of
// two. Self-inverse.
void fwht_orthonormal(std::span<double> v);

// Seeded Rademacher diagonal entry: +1 or -1 as a pure function of
// (seed, index).
double rademacher_sign(uint64_t seed, uint64_t index);

// y = H D u on the zero-padded input: random sign flips, then the orthonormal
// Hadamard transform. Preserves the l2 norm of the padded vector.
std::vector<double> randomized_hadamard(std::span<const double> u, uint64_t seed);

// D H y truncated to original_d. Throws std::invalid_argument unless
// y.size() == padded_length(original_d).
std::vector<double> inverse_hadamard(std::span<const double> y, uint64_t seed,
                                     size_t original_d);

// (u / ||u||2, ||u||2); the zero vector maps to (zero vector, 0).
std::pair<std::vector<double>, double> normalize(std::span<const double> u);

}  // namespace fedcodec
