#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedcodec/codec.hpp"
#include "fedcodec/rng.hpp"

namespace fedcodec {

// One realized encode of u at a fixed step: payload bits and squared error
// for a single stochastic draw (the same draw feeds both terms).
struct RdDraw {
  uint64_t payload_bits = 0;
  double squared_error = 0.0;  // sum over coordinates
  double entropy_bits = 0.0;   // empirical bits/symbol of the quantized q
};

RdDraw rd_evaluate(std::span<const double> u, double delta, Rng& rng,
                   Code code = Code::gamma,
                   Quantizer quantizer = Quantizer::stochastic);

// Lagrangian the clients minimize: J(delta) = payload bits + lambda * squared
// error. Header bits are excluded; they are a fixed cost common to all deltas.
double client_objective(std::span<const double> u, double delta, double lambda,
                        Rng& rng, Code code = Code::gamma,
                        Quantizer quantizer = Quantizer::stochastic);

// Argmin of the objective over the grid; ties break toward the larger delta
// (the cheaper rate). Each grid point gets an independent draw derived from
// one value consumed off `rng`, so a brute-force re-evaluation with the same
// derivation reproduces the vote exactly.
size_t client_vote_index(std::span<const double> u,
                         std::span<const double> grid, double lambda, Rng& rng,
                         Code code = Code::gamma,
                         Quantizer quantizer = Quantizer::stochastic);

// The winning delta itself.
double client_vote(std::span<const double> u, std::span<const double> grid,
                   double lambda, Rng& rng, Code code = Code::gamma,
                   Quantizer quantizer = Quantizer::stochastic);

// One vote per update, counted per grid index. Every client evaluates with a
// fresh rng seeded from the same `seed`, so identical updates always land in
// the same bucket.
std::vector<uint64_t> vote_histogram(
    std::span<const std::vector<double>> updates, std::span<const double> grid,
    double lambda, uint64_t seed, Code code = Code::gamma,
    Quantizer quantizer = Quantizer::stochastic);

// Mode of the histogram; ties break toward the larger delta.
size_t vote_winner(std::span<const uint64_t> histogram);

// Rate/distortion/entropy at one delta averaged over a set of updates.
// Rates are payload-only, per element.
struct RdPoint {
  double delta = 0.0;
  double mean_rate_bits_per_elem = 0.0;
  double mean_distortion_per_elem = 0.0;
  double mean_entropy_bits = 0.0;  // bits/symbol
};

std::vector<RdPoint> rd_sweep(std::span<const std::vector<double>> updates,
                              std::span<const double> grid, uint64_t seed,
                              Code code = Code::gamma,
                              Quantizer quantizer = Quantizer::stochastic);

// Smallest delta on the curve whose mean rate meets the budget.
// Throws InfeasibleBudgetError when no point qualifies.
double select_delta_for_budget(std::span<const RdPoint> curve,
                               double budget_bits_per_elem);

// log-spaced grid over [lo, hi], inclusive on both ends.
std::vector<double> log_grid(double lo, double hi, size_t count);

}  // namespace fedcodec
