#include "fedcodec/rd_control.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "fedcodec/errors.hpp"

namespace fedcodec {

RdDraw rd_evaluate(std::span<const double> u, double delta, Rng& rng,
                   Code code, Quantizer quantizer) {
  // Mirrors encode_update (including the f32 step narrowing and rng
  // consumption) while keeping the symbols for the entropy term.
  float fstep = static_cast<float>(delta);
  uint64_t dither_seed =
      quantizer == Quantizer::dithered ? rng.next_u64() : 0;
  std::vector<int64_t> q =
      quantize(u, static_cast<double>(fstep), quantizer, rng, dither_seed);
  BitString payload = encode_symbols(q, code);
  std::vector<double> u_hat = dequantize_symbols(
      q, static_cast<double>(fstep), quantizer, dither_seed);

  RdDraw out;
  out.payload_bits = payload.size();
  out.squared_error = distortion(u, u_hat);
  out.entropy_bits = u.empty() ? 0.0 : symbol_stats(q).entropy_bits;
  return out;
}

double client_objective(std::span<const double> u, double delta, double lambda,
                        Rng& rng, Code code, Quantizer quantizer) {
  RdDraw draw = rd_evaluate(u, delta, rng, code, quantizer);
  return static_cast<double>(draw.payload_bits) + lambda * draw.squared_error;
}

size_t client_vote_index(std::span<const double> u,
                         std::span<const double> grid, double lambda, Rng& rng,
                         Code code, Quantizer quantizer) {
  if (grid.empty()) throw std::invalid_argument("client_vote: empty grid");
  uint64_t base = rng.next_u64();
  size_t best = 0;
  double best_objective = 0.0;
  for (size_t j = 0; j < grid.size(); ++j) {
    Rng draw_rng(Rng::derive(base, j));
    double objective =
        client_objective(u, grid[j], lambda, draw_rng, code, quantizer);
    if (j == 0 || objective < best_objective ||
        (objective == best_objective && grid[j] > grid[best])) {
      best = j;
      best_objective = objective;
    }
  }
  return best;
}

double client_vote(std::span<const double> u, std::span<const double> grid,
                   double lambda, Rng& rng, Code code, Quantizer quantizer) {
  return grid[client_vote_index(u, grid, lambda, rng, code, quantizer)];
}

std::vector<uint64_t> vote_histogram(
    std::span<const std::vector<double>> updates, std::span<const double> grid,
    double lambda, uint64_t seed, Code code, Quantizer quantizer) {
  if (updates.empty())
    throw std::invalid_argument("vote_histogram: no updates");
  std::vector<uint64_t> counts(grid.size(), 0);
  for (const std::vector<double>& u : updates) {
    Rng rng(seed);
    ++counts[client_vote_index(u, grid, lambda, rng, code, quantizer)];
  }
  return counts;
}

size_t vote_winner(std::span<const uint64_t> histogram) {
  if (histogram.empty())
    throw std::invalid_argument("vote_winner: empty histogram");
  size_t best = 0;
  for (size_t j = 1; j < histogram.size(); ++j)
    if (histogram[j] >= histogram[best]) best = j;  // ties to larger delta
  return best;
}

std::vector<RdPoint> rd_sweep(std::span<const std::vector<double>> updates,
                              std::span<const double> grid, uint64_t seed,
                              Code code, Quantizer quantizer) {
  if (updates.empty()) throw std::invalid_argument("rd_sweep: no updates");
  std::vector<RdPoint> rows;
  rows.reserve(grid.size());
  for (size_t j = 0; j < grid.size(); ++j) {
    RdPoint row;
    row.delta = grid[j];
    for (size_t i = 0; i < updates.size(); ++i) {
      Rng rng(Rng::derive(seed, i, j));
      RdDraw draw = rd_evaluate(updates[i], grid[j], rng, code, quantizer);
      double d = static_cast<double>(updates[i].size());
      row.mean_rate_bits_per_elem += static_cast<double>(draw.payload_bits) / d;
      row.mean_distortion_per_elem += draw.squared_error / d;
      row.mean_entropy_bits += draw.entropy_bits;
    }
    double n = static_cast<double>(updates.size());
    row.mean_rate_bits_per_elem /= n;
    row.mean_distortion_per_elem /= n;
    row.mean_entropy_bits /= n;
    rows.push_back(row);
  }
  return rows;
}

double select_delta_for_budget(std::span<const RdPoint> curve,
                               double budget_bits_per_elem) {
  if (curve.empty())
    throw std::invalid_argument("select_delta_for_budget: empty curve");
  std::optional<double> best;
  for (const RdPoint& row : curve)
    if (row.mean_rate_bits_per_elem <= budget_bits_per_elem &&
        (!best || row.delta < *best))
      best = row.delta;
  if (!best)
    throw InfeasibleBudgetError(
        "no grid delta meets the budget of " +
        std::to_string(budget_bits_per_elem) + " bits/element");
  return *best;
}

std::vector<double> log_grid(double lo, double hi, size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0)
    throw std::invalid_argument("log_grid: need 0 < lo <= hi and count >= 1");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
  for (size_t i = 0; i < count; ++i)
    grid[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace fedcodec
