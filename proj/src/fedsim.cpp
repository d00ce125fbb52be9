#include "fedcodec/fedsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <stdexcept>

#include "fedcodec/rd_control.hpp"
#include "fedcodec/transforms.hpp"

namespace fedcodec {
namespace {

// Stream labels under the master seed, so every draw in a run has a fixed
// address independent of execution order.
enum : uint64_t { kInitStream, kSampleStream, kShuffleStream, kEncodeStream,
                  kRotationStream };

uint64_t round_client(uint32_t t, uint32_t k) {
  return (static_cast<uint64_t>(t) << 32) | k;
}

struct ClientResult {
  double weight = 0.0;
  double pre_loss = 0.0;
  uint64_t payload_bits = 0;
  uint64_t wire_bits = 0;  // payload + header + side info + weight metadata
  double distortion_per_elem = 0.0;
  std::vector<double> decoded;  // what the server adds into the aggregate
};

// Encode/decode one weighted update per the compressor config. Exact-decode
// paths keep doubles so the no-compression aggregate matches the raw mean.
ClientResult compress_update(const std::vector<double>& u,
                             const CompressorConfig& cfg, Rng& rng,
                             uint64_t rotation_seed) {
  ClientResult out;
  size_t d = u.size();
  double dd = static_cast<double>(d);

  auto finish = [&](std::vector<double> decoded, uint64_t payload_bits,
                    uint64_t side_bits) {
    out.distortion_per_elem = d == 0 ? 0.0 : distortion(u, decoded) / dd;
    out.decoded = std::move(decoded);
    out.payload_bits = payload_bits;
    out.wire_bits = payload_bits + kHeaderBits + side_bits + 32;  // +w_k
  };

  if (cfg.kind == CompressorKind::none ||
      (cfg.kind == CompressorKind::baseline &&
       cfg.baseline.method == Method::none)) {
    finish(u, none_payload_bits(d), 0);
    return out;
  }

  if (cfg.kind == CompressorKind::main) {
    std::vector<double> v = u;
    double norm = 1.0;
    uint64_t side_bits = 0;
    if (cfg.normalize) {
      auto [unit, n] = normalize(v);
      v = std::move(unit);
      norm = n;
      side_bits += 32;
    }
    bool rotated = cfg.rotate;
    if (rotated) v = randomized_hadamard(v, rotation_seed);
    EncodedUpdate e =
        encode_update(v, cfg.delta, rng, cfg.code, cfg.quantizer);
    std::vector<double> decoded = decode_update(e);
    if (rotated) decoded = inverse_hadamard(decoded, rotation_seed, d);
    if (cfg.normalize)
      for (double& x : decoded) x *= norm;
    finish(std::move(decoded), e.payload.size(), side_bits);
    return out;
  }

  const BaselineConfig& b = cfg.baseline;
  switch (b.method) {
    case Method::topk: {
      TopkMessage m = topk_encode(u, b.topk_fraction);
      finish(topk_decode(m), topk_payload_bits(m), 0);
      return out;
    }
    case Method::qsgd: {
      QsgdMessage m = qsgd_encode(u, b.qsgd_levels, rng);
      finish(qsgd_decode(m), qsgd_payload_bits(m), 0);
      return out;
    }
    case Method::drive: {
      DriveMessage m = drive_encode(u, rng.next_u64());
      finish(drive_decode(m), drive_payload_bits(m), 0);
      return out;
    }
    case Method::tlc: {
      TlcMessage m = tlc_encode(u, b.tlc_sparsity, rng);
      finish(tlc_decode(m), tlc_reported_payload_bits(m), 0);
      return out;
    }
    case Method::none:
      break;
  }
  throw std::invalid_argument("compress_update: unknown method");
}

ClientResult run_client(const FederatedTask& task, const FedConfig& cfg,
                        const std::vector<double>& theta, uint32_t t,
                        uint32_t k, uint64_t rotation_seed) {
  const Dataset& data = task.clients[k];
  ClientResult result;

  Rng shuffle_rng(
      Rng::derive(cfg.seed, kShuffleStream, round_client(t, k)));
  std::vector<double> theta_k =
      local_train(task.spec, theta, data, cfg.local_epochs, cfg.client_lr,
                  cfg.batch_size, shuffle_rng);

  double w_k = static_cast<double>(data.size());
  std::vector<double> u(theta.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = w_k * (theta_k[i] - theta[i]);

  Rng encode_rng(Rng::derive(cfg.seed, kEncodeStream, round_client(t, k)));
  result = compress_update(u, cfg.compressor, encode_rng, rotation_seed);
  result.weight = w_k;
  result.pre_loss = loss(task.spec, theta, data, {});
  return result;
}

}  // namespace

std::string trace_to_csv(const TrainingTrace& trace) {
  std::string csv =
      "round,train_loss,eval_accuracy,mean_rate_bits_per_elem,"
      "cumulative_upstream_bits,mean_distortion_per_elem\n";
  char line[256];
  for (const RoundRecord& r : trace.rounds) {
    std::snprintf(line, sizeof line, "%u,%.10g,%.10g,%.10g,%llu,%.10g\n",
                  r.round, r.train_loss, r.eval_accuracy,
                  r.mean_rate_bits_per_elem,
                  static_cast<unsigned long long>(r.cumulative_upstream_bits),
                  r.mean_distortion);
    csv += line;
  }
  return csv;
}

std::vector<double> local_train(const TaskSpec& spec,
                                std::span<const double> theta,
                                const Dataset& data, uint32_t epochs,
                                double lr, uint32_t batch, Rng& rng) {
  std::vector<double> w(theta.begin(), theta.end());
  size_t n = data.size();
  if (n == 0) return w;
  if (batch == 0) throw std::invalid_argument("local_train: batch must be >= 1");

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<double> grad(w.size());
  for (uint32_t e = 0; e < epochs; ++e) {
    for (size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[rng.next_below(i)]);
    for (size_t start = 0; start < n; start += batch) {
      size_t len = std::min<size_t>(batch, n - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      add_gradient(spec, w, data,
                   std::span<const size_t>(order).subspan(start, len), grad);
      for (size_t i = 0; i < w.size(); ++i) w[i] -= lr * grad[i];
    }
  }
  return w;
}

void server_update_sgd(std::span<double> theta, std::span<const double> g,
                       double lr) {
  for (size_t i = 0; i < theta.size(); ++i) theta[i] -= lr * g[i];
}

void server_update_adam(std::span<double> theta, std::span<const double> g,
                        double lr, const AdamConfig& cfg, AdamState& state) {
  if (state.m.empty()) {
    state.m.assign(theta.size(), 0.0);
    state.v.assign(theta.size(), 0.0);
  }
  if (state.m.size() != theta.size())
    throw std::invalid_argument("adam: state size mismatch");
  state.t += 1;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    double m_hat = state.m[i] / bc1;
    double v_hat = state.v[i] / bc2;
    theta[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

std::vector<uint32_t> sample_clients(uint32_t num_clients, uint32_t m,
                                     Rng& rng) {
  if (m > num_clients)
    throw std::invalid_argument("sample_clients: m exceeds the population");
  std::vector<uint32_t> ids(num_clients);
  std::iota(ids.begin(), ids.end(), 0u);
  for (uint32_t i = 0; i < m; ++i) {
    uint32_t j = i + static_cast<uint32_t>(rng.next_below(num_clients - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(m);
  std::sort(ids.begin(), ids.end());
  return ids;
}

TrainingTrace run_training(const FederatedTask& task, const FedConfig& cfg) {
  const TaskSpec& spec = task.spec;
  if (cfg.rounds < 1 || cfg.clients_per_round < 1 || cfg.local_epochs < 1)
    throw std::invalid_argument("run_training: counts must be >= 1");
  if (cfg.clients_per_round > spec.num_clients)
    throw std::invalid_argument("run_training: m exceeds K");
  if (!(cfg.client_lr > 0.0) || !(cfg.server_lr > 0.0))
    throw std::invalid_argument("run_training: learning rates must be > 0");
  if (cfg.batch_size < 1)
    throw std::invalid_argument("run_training: batch must be >= 1");

  std::vector<double> theta =
      init_params(spec, Rng::derive(cfg.seed, kInitStream));
  double d = static_cast<double>(theta.size());
  uint64_t rotation_seed = Rng::derive(cfg.seed, kRotationStream);

  AdamState adam;
  TrainingTrace trace;
  trace.rounds.reserve(cfg.rounds);
  uint64_t cumulative_bits = 0;

  for (uint32_t t = 0; t < cfg.rounds; ++t) {
    Rng sample_rng(Rng::derive(cfg.seed, kSampleStream, t));
    std::vector<uint32_t> selected =
        sample_clients(spec.num_clients, cfg.clients_per_round, sample_rng);

    // Every client draws only from its own (round, id) derived streams, so
    // the results are the same whether they run here or on threads.
    std::vector<ClientResult> results(selected.size());
    if (cfg.parallel) {
      std::vector<std::future<ClientResult>> jobs;
      jobs.reserve(selected.size());
      for (uint32_t k : selected)
        jobs.push_back(std::async(std::launch::async, run_client,
                                  std::cref(task), std::cref(cfg),
                                  std::cref(theta), t, k, rotation_seed));
      for (size_t j = 0; j < jobs.size(); ++j) results[j] = jobs[j].get();
    } else {
      for (size_t j = 0; j < selected.size(); ++j)
        results[j] = run_client(task, cfg, theta, t, selected[j],
                                rotation_seed);
    }

    // Reduce in ascending client id order (selected is sorted).
    std::vector<double> sum(theta.size(), 0.0);
    double sum_w = 0.0;
    double loss_acc = 0.0;
    double rate_acc = 0.0;
    double dist_acc = 0.0;
    for (const ClientResult& r : results) {
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += r.decoded[i];
      sum_w += r.weight;
      loss_acc += r.weight * r.pre_loss;
      rate_acc += static_cast<double>(r.payload_bits) / d;
      dist_acc += r.distortion_per_elem;
      cumulative_bits += r.wire_bits;
    }

    if (sum_w > 0.0) {
      // The server treats the negated mean decoded update as the
      // pseudo-gradient, so SGD with eta_s = 1 is FedAvg.
      std::vector<double> g(theta.size());
      for (size_t i = 0; i < g.size(); ++i) g[i] = -sum[i] / sum_w;
      if (cfg.server_opt == ServerOpt::sgd)
        server_update_sgd(theta, g, cfg.server_lr);
      else
        server_update_adam(theta, g, cfg.server_lr, cfg.adam, adam);
    }

    double n_clients = static_cast<double>(results.size());
    RoundRecord record;
    record.round = t;
    record.train_loss = sum_w > 0.0 ? loss_acc / sum_w : 0.0;
    record.eval_accuracy = evaluate(spec, theta, task.eval).accuracy;
    record.mean_rate_bits_per_elem = rate_acc / n_clients;
    record.cumulative_upstream_bits = cumulative_bits;
    record.mean_distortion = dist_acc / n_clients;
    trace.rounds.push_back(record);
  }
  return trace;
}

}  // namespace fedcodec
