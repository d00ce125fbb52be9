#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace fedcodec {

enum class Quantizer : uint8_t {
  round = 0,
  stochastic = 1,
  dithered = 2,
};

// Weighted model delta one client sends upstream in one round.
struct ClientUpdate {
  std::vector<double> values;
  double weight = 1.0;  // example count of the client
  uint64_t client_id = 0;
  uint32_t round = 0;
};

// Integer symbols produced by one of the uniform quantizers.
struct QuantizedUpdate {
  std::vector<int64_t> symbols;
  double step = 1.0;
  Quantizer quantizer = Quantizer::stochastic;
  std::optional<uint64_t> dither_seed;  // present iff quantizer == dithered
};

struct UpdateStats {
  double sparsity = 0.0;      // fraction of zero symbols
  double entropy_bits = 0.0;  // empirical plug-in entropy, bits/symbol
  std::map<int64_t, uint64_t> histogram;
};

// Sparsity, plug-in entropy and histogram of a symbol vector.
// Throws std::invalid_argument on an empty vector.
UpdateStats symbol_stats(std::span<const int64_t> symbols);
UpdateStats update_stats(const QuantizedUpdate& q);

// Squared Euclidean distance between an update and its reconstruction.
// Throws std::invalid_argument on length mismatch.
double distortion(std::span<const double> u, std::span<const double> u_hat);

}  // namespace fedcodec
