#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedcodec/baselines.hpp"
#include "fedcodec/codec.hpp"
#include "fedcodec/synth.hpp"

namespace fedcodec {

enum class ServerOpt : uint8_t { sgd, adam };

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-3;
};

enum class CompressorKind : uint8_t { none, main, baseline };

struct CompressorConfig {
  CompressorKind kind = CompressorKind::none;
  // Main codec settings.
  double delta = 1.0;
  Quantizer quantizer = Quantizer::stochastic;
  Code code = Code::gamma;
  bool rotate = false;     // encode in the randomized-Hadamard domain
  bool normalize = false;  // encode u/||u||, send the norm as side info
  // Baseline settings (kind == baseline).
  BaselineConfig baseline;
};

struct FedConfig {
  uint32_t rounds = 200;            // T
  uint32_t clients_per_round = 10;  // m
  uint32_t local_epochs = 1;        // E
  uint32_t batch_size = 32;
  double client_lr = 0.1;
  double server_lr = 1.0;
  ServerOpt server_opt = ServerOpt::sgd;
  AdamConfig adam;
  CompressorConfig compressor;
  bool parallel = false;  // run clients on threads; trace is unchanged
  uint64_t seed = 1;      // sampling + rounding randomness
};

struct RoundRecord {
  uint32_t round = 0;
  double train_loss = 0.0;     // weighted mean pre-update loss, participants
  double eval_accuracy = 0.0;  // post-update, held-out set
  double mean_rate_bits_per_elem = 0.0;  // payload only, mean over clients
  uint64_t cumulative_upstream_bits = 0;  // payload + header + weight metadata
  double mean_distortion = 0.0;  // squared error / element, mean over clients
};

struct TrainingTrace {
  std::vector<RoundRecord> rounds;
};

// CSV per the TrainingTrace schema, with a units-bearing header row.
std::string trace_to_csv(const TrainingTrace& trace);

// E epochs of shuffled mini-batch SGD from theta; empty dataset returns theta.
std::vector<double> local_train(const TaskSpec& spec,
                                std::span<const double> theta,
                                const Dataset& data, uint32_t epochs,
                                double lr, uint32_t batch, Rng& rng);

void server_update_sgd(std::span<double> theta, std::span<const double> g,
                       double lr);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  uint64_t t = 0;
};

void server_update_adam(std::span<double> theta, std::span<const double> g,
                        double lr, const AdamConfig& cfg, AdamState& state);

// m distinct client ids in ascending order, sampled uniformly.
std::vector<uint32_t> sample_clients(uint32_t num_clients, uint32_t m,
                                     Rng& rng);

// Federated loop: per round, sample m clients, broadcast theta, local-train,
// encode/decode the weighted updates u_k = w_k (theta_k - theta), aggregate
// g = -sum(decode) / sum(w), and apply the server optimizer. Stateless
// clients; every client draws its randomness from a (round, client) derived
// seed, and aggregation reduces in ascending client id order, so serial and
// parallel execution produce identical traces.
TrainingTrace run_training(const FederatedTask& task, const FedConfig& cfg);

}  // namespace fedcodec
