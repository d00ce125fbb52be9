#include "fedcodec/quantizer.hpp"

#include <cmath>
#include <stdexcept>

#include "fedcodec/bitcode.hpp"

namespace fedcodec {
namespace {

void check_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("quantizer: step must be positive and finite");
}

// Doubles this large can no longer be quantized into the 62-bit code range.
int64_t checked_symbol(double t) {
  if (!std::isfinite(t) || std::abs(t) >= 0x1p62)
    throw std::overflow_error("quantizer: |u/step| exceeds the 62-bit range");
  return static_cast<int64_t>(t);
}

}  // namespace

std::vector<int64_t> round_uniform(std::span<const double> u, double step) {
  check_step(step);
  std::vector<int64_t> q(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]))
      throw std::invalid_argument("quantizer: non-finite input");
    q[i] = checked_symbol(std::nearbyint(u[i] / step));
  }
  return q;
}

std::vector<int64_t> stochastic_round(std::span<const double> u, double step,
                                      Rng& rng) {
  check_step(step);
  std::vector<int64_t> q(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]))
      throw std::invalid_argument("quantizer: non-finite input");
    double t = u[i] / step;
    double lo = std::floor(t);
    // One draw per coordinate whether or not t is already integral.
    double up = rng.next_unit() < (t - lo) ? 1.0 : 0.0;
    q[i] = checked_symbol(lo + up);
  }
  return q;
}

double dither_noise(uint64_t seed, uint64_t index) {
  return unit_at(seed, index) - 0.5;
}

std::vector<int64_t> dither_round(std::span<const double> u, double step,
                                  std::span<const double> noise) {
  check_step(step);
  if (noise.size() != u.size())
    throw std::invalid_argument("dither_round: noise length mismatch");
  std::vector<int64_t> q(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]))
      throw std::invalid_argument("quantizer: non-finite input");
    q[i] = checked_symbol(std::nearbyint(u[i] / step - noise[i]));
  }
  return q;
}

QuantizedUpdate dithered_quantize(std::span<const double> u, double step,
                                  uint64_t seed) {
  std::vector<double> noise(u.size());
  for (size_t i = 0; i < u.size(); ++i) noise[i] = dither_noise(seed, i);
  QuantizedUpdate out;
  out.symbols = dither_round(u, step, noise);
  out.step = step;
  out.quantizer = Quantizer::dithered;
  out.dither_seed = seed;
  return out;
}

std::vector<int64_t> quantize(std::span<const double> u, double step,
                              Quantizer quantizer, Rng& rng,
                              uint64_t dither_seed) {
  switch (quantizer) {
    case Quantizer::round:
      return round_uniform(u, step);
    case Quantizer::stochastic:
      return stochastic_round(u, step, rng);
    case Quantizer::dithered:
      return dithered_quantize(u, step, dither_seed).symbols;
  }
  throw std::invalid_argument("quantize: unknown quantizer");
}

std::vector<double> dequantize(const QuantizedUpdate& q) {
  if (q.quantizer == Quantizer::dithered && !q.dither_seed)
    throw std::invalid_argument("dequantize: dithered update without a seed");
  return dequantize_symbols(q.symbols, q.step, q.quantizer,
                            q.dither_seed.value_or(0));
}

std::vector<double> dequantize_symbols(std::span<const int64_t> symbols,
                                       double step, Quantizer quantizer,
                                       uint64_t dither_seed) {
  check_step(step);
  std::vector<double> u(symbols.size());
  for (size_t i = 0; i < symbols.size(); ++i) {
    double q = static_cast<double>(symbols[i]);
    if (quantizer == Quantizer::dithered) q += dither_noise(dither_seed, i);
    u[i] = step * q;
  }
  return u;
}

}  // namespace fedcodec
