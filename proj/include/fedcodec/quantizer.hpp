#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedcodec/rng.hpp"
#include "fedcodec/update.hpp"

namespace fedcodec {

// Nearest-integer rounding of u/step, ties to even.
// Throws std::invalid_argument if step <= 0 or any input is not finite.
std::vector<int64_t> round_uniform(std::span<const double> u, double step);

// Unbiased randomized rounding: ceil(u/step) with probability equal to the
// fractional part of u/step, floor otherwise. Exact multiples of step are
// returned deterministically.
std::vector<int64_t> stochastic_round(std::span<const double> u, double step, Rng& rng);

// Dither value for one coordinate: i.i.d. U(-0.5, 0.5) as a pure function of
// (seed, index), so the decoder regenerates it without knowing draw order.
double dither_noise(uint64_t seed, uint64_t index);

// Core of the dithered quantizer with explicit noise, one z per coordinate.
std::vector<int64_t> dither_round(std::span<const double> u, double step,
                                  std::span<const double> noise);

// q_i = round(u_i/step - z_i) with z from the seeded stream; the seed is
// stored so the decoder can reconstruct the same noise.
QuantizedUpdate dithered_quantize(std::span<const double> u, double step, uint64_t seed);

std::vector<int64_t> quantize(std::span<const double> u, double step,
                              Quantizer quantizer, Rng& rng, uint64_t dither_seed);

// round/stochastic: step * q; dithered: step * (q + z), subtractive dither.
// Throws std::invalid_argument for a dithered update without a seed.
std::vector<double> dequantize(const QuantizedUpdate& q);

std::vector<double> dequantize_symbols(std::span<const int64_t> symbols, double step,
                                       Quantizer quantizer, uint64_t dither_seed);

}  // namespace fedcodec
