#include "fedcodec/rng.hpp"

#include <cmath>
#include <numbers>

namespace fedcodec {

double Rng::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  double u1 = 1.0 - next_unit();
  double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t Rng::next_below(uint64_t n) {
  // Rejection below the largest multiple of n, so the result is exactly
  // uniform.
  uint64_t threshold = -n % n;
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

}  // namespace fedcodec
