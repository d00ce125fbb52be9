#include "fedcodec/update.hpp"

#include <cmath>
#include <stdexcept>

namespace fedcodec {

UpdateStats symbol_stats(std::span<const int64_t> symbols) {
  if (symbols.empty()) throw std::invalid_argument("symbol_stats: empty input");
  UpdateStats stats;
  uint64_t zeros = 0;
  for (int64_t s : symbols) {
    ++stats.histogram[s];
    if (s == 0) ++zeros;
  }
  double n = static_cast<double>(symbols.size());
  stats.sparsity = static_cast<double>(zeros) / n;
  for (const auto& [symbol, count] : stats.histogram) {
    double p = static_cast<double>(count) / n;
    stats.entropy_bits -= p * std::log2(p);
  }
  return stats;
}

UpdateStats update_stats(const QuantizedUpdate& q) {
  return symbol_stats(q.symbols);
}

double distortion(std::span<const double> u, std::span<const double> u_hat) {
  if (u.size() != u_hat.size())
    throw std::invalid_argument("distortion: length mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    double e = u[i] - u_hat[i];
    sum += e * e;
  }
  return sum;
}

}  // namespace fedcodec
