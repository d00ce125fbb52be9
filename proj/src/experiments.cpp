#include "fedcodec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "json.hpp"

#include "fedcodec/errors.hpp"
#include "fedcodec/fedsim.hpp"
#include "fedcodec/rd_control.hpp"
#include "fedcodec/transforms.hpp"

namespace fedcodec {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Strict view over one JSON object: every key must be consumed by a getter,
// and done() rejects the rest, so config typos never silently default.
class ConfigView {
 public:
  ConfigView(const json& node, std::string path)
      : node_(&node), path_(std::move(path)) {
    if (!node.is_object())
      throw ConfigError(path_ + " must be an object");
  }

  const std::string& path() const { return path_; }

  bool has(const char* key) const { return node_->contains(key); }

  double number(const char* key) {
    const json& v = require(key);
    if (!v.is_number()) throw ConfigError(at(key) + " must be a number");
    return v.get<double>();
  }

  double number(const char* key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  uint64_t uint(const char* key) {
    const json& v = require(key);
    if (!v.is_number_integer() ||
        (v.is_number_integer() && !v.is_number_unsigned() &&
         v.get<int64_t>() < 0))
      throw ConfigError(at(key) + " must be a nonnegative integer");
    return v.get<uint64_t>();
  }

  uint64_t uint(const char* key, uint64_t fallback) {
    return has(key) ? uint(key) : fallback;
  }

  bool boolean(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = require(key);
    if (!v.is_boolean()) throw ConfigError(at(key) + " must be a boolean");
    return v.get<bool>();
  }

  std::string str(const char* key) {
    const json& v = require(key);
    if (!v.is_string()) throw ConfigError(at(key) + " must be a string");
    return v.get<std::string>();
  }

  std::string str(const char* key, const std::string& fallback) {
    return has(key) ? str(key) : fallback;
  }

  ConfigView section(const char* key) {
    return ConfigView(require(key), at(key));
  }

  const json& raw(const char* key) { return require(key); }

  void done() const {
    for (const auto& item : node_->items())
      if (!consumed_.contains(item.key()))
        throw ConfigError("unknown key '" + item.key() + "' in " + path_);
  }

 private:
  const json& require(const char* key) {
    if (!node_->contains(key))
      throw ConfigError(path_ + " is missing required key '" + key + "'");
    consumed_.insert(key);
    return (*node_)[key];
  }

  std::string at(const char* key) const { return path_ + "." + key; }

  const json* node_;
  std::string path_;
  std::set<std::string> consumed_;
};

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  return j;
}

Quantizer parse_quantizer(const std::string& name, const std::string& path) {
  if (name == "round") return Quantizer::round;
  if (name == "stochastic") return Quantizer::stochastic;
  if (name == "dithered") return Quantizer::dithered;
  throw ConfigError(path + ": unknown quantizer '" + name + "'");
}

Code parse_code(const std::string& name, const std::string& path) {
  if (name == "gamma") return Code::gamma;
  if (name == "delta") return Code::delta;
  throw ConfigError(path + ": unknown code '" + name + "'");
}

std::vector<double> parse_grid(ConfigView& cfg) {
  const json& g = cfg.raw("grid");
  if (g.is_array()) {
    std::vector<double> grid;
    for (const json& v : g) {
      if (!v.is_number() || !(v.get<double>() > 0.0))
        throw ConfigError(cfg.path() + ".grid entries must be positive");
      grid.push_back(v.get<double>());
    }
    if (grid.empty()) throw ConfigError(cfg.path() + ".grid is empty");
    for (size_t i = 1; i < grid.size(); ++i)
      if (grid[i] <= grid[i - 1])
        throw ConfigError(cfg.path() + ".grid must be strictly increasing");
    return grid;
  }
  ConfigView spec(g, cfg.path() + ".grid");
  double lo = spec.number("lo");
  double hi = spec.number("hi");
  uint64_t count = spec.uint("count");
  spec.done();
  try {
    return log_grid(lo, hi, count);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.path() + ".grid: " + e.what());
  }
}

TaskSpec parse_task(ConfigView& parent, uint64_t master_seed) {
  ConfigView t = parent.section("task");
  TaskSpec spec;
  std::string kind = t.str("kind");
  if (kind == "linear_regression") spec.kind = TaskKind::linear_regression;
  else if (kind == "logistic_regression")
    spec.kind = TaskKind::logistic_regression;
  else if (kind == "small_mlp") spec.kind = TaskKind::small_mlp;
  else throw ConfigError(t.path() + ".kind: unknown task '" + kind + "'");
  spec.dimension = static_cast<uint32_t>(t.uint("dimension"));
  spec.hidden = static_cast<uint32_t>(t.uint("hidden", 8));
  spec.num_clients = static_cast<uint32_t>(t.uint("num_clients"));
  spec.size_exponent = t.number("size_exponent", 1.5);
  spec.min_examples = static_cast<uint32_t>(t.uint("min_examples", 8));
  spec.max_examples = static_cast<uint32_t>(t.uint("max_examples", 256));
  spec.label_skew = t.number("label_skew", 1.0);
  spec.margin = t.number("margin", 1.3);
  spec.noise = t.number("noise", 0.05);
  spec.eval_examples = static_cast<uint32_t>(t.uint("eval_examples", 2000));
  spec.master_seed = Rng::derive(master_seed, 10);
  t.done();
  return spec;
}

CompressorConfig parse_compressor(const json& node, const std::string& path) {
  ConfigView c(node, path);
  CompressorConfig out;
  std::string kind = c.str("kind");
  if (kind == "none") {
    out.kind = CompressorKind::none;
  } else if (kind == "main") {
    out.kind = CompressorKind::main;
    out.delta = c.number("delta");
    if (!(out.delta > 0.0))
      throw ConfigError(path + ".delta must be positive");
    out.quantizer = parse_quantizer(c.str("quantizer", "stochastic"), path);
    out.code = parse_code(c.str("code", "gamma"), path);
    out.rotate = c.boolean("rotate", false);
    out.normalize = c.boolean("normalize", false);
  } else if (kind == "topk") {
    out.kind = CompressorKind::baseline;
    out.baseline.method = Method::topk;
    out.baseline.topk_fraction = c.number("fraction");
    if (!(out.baseline.topk_fraction > 0.0) ||
        out.baseline.topk_fraction > 1.0)
      throw ConfigError(path + ".fraction must be in (0, 1]");
  } else if (kind == "qsgd") {
    out.kind = CompressorKind::baseline;
    out.baseline.method = Method::qsgd;
    uint64_t levels = c.uint("levels");
    if (levels < 1) throw ConfigError(path + ".levels must be >= 1");
    out.baseline.qsgd_levels = static_cast<uint32_t>(levels);
  } else if (kind == "drive") {
    out.kind = CompressorKind::baseline;
    out.baseline.method = Method::drive;
  } else if (kind == "tlc") {
    out.kind = CompressorKind::baseline;
    out.baseline.method = Method::tlc;
    out.baseline.tlc_sparsity = c.number("sparsity");
    if (!(out.baseline.tlc_sparsity >= 1.0))
      throw ConfigError(path + ".sparsity must be >= 1");
  } else {
    throw ConfigError(path + ".kind: unknown compressor '" + kind + "'");
  }
  c.done();
  return out;
}

double compressor_param(const CompressorConfig& c) {
  if (c.kind == CompressorKind::none) return 0.0;
  if (c.kind == CompressorKind::main) return c.delta;
  switch (c.baseline.method) {
    case Method::topk: return c.baseline.topk_fraction;
    case Method::qsgd: return static_cast<double>(c.baseline.qsgd_levels);
    case Method::tlc: return c.baseline.tlc_sparsity;
    default: return 0.0;
  }
}

std::string compressor_name(const CompressorConfig& c) {
  if (c.kind == CompressorKind::none) return "none";
  if (c.kind == CompressorKind::main) return "main";
  return method_name(c.baseline.method);
}

FedConfig parse_fed(ConfigView& parent, uint64_t master_seed) {
  ConfigView f = parent.section("fed");
  FedConfig cfg;
  cfg.rounds = static_cast<uint32_t>(f.uint("rounds", 200));
  cfg.clients_per_round = static_cast<uint32_t>(f.uint("clients_per_round", 10));
  cfg.local_epochs = static_cast<uint32_t>(f.uint("local_epochs", 1));
  cfg.batch_size = static_cast<uint32_t>(f.uint("batch_size", 32));
  cfg.client_lr = f.number("client_lr");
  cfg.server_lr = f.number("server_lr", 1.0);
  std::string opt = f.str("server_opt", "sgd");
  if (opt == "sgd") cfg.server_opt = ServerOpt::sgd;
  else if (opt == "adam") cfg.server_opt = ServerOpt::adam;
  else throw ConfigError(f.path() + ".server_opt: unknown optimizer");
  if (f.has("adam")) {
    if (cfg.server_opt != ServerOpt::adam)
      throw ConfigError(f.path() + ".adam requires server_opt \"adam\"");
    ConfigView a = f.section("adam");
    cfg.adam.beta1 = a.number("beta1", 0.9);
    cfg.adam.beta2 = a.number("beta2", 0.999);
    cfg.adam.eps = a.number("eps", 1e-3);
    a.done();
  }
  cfg.parallel = f.boolean("parallel", false);
  cfg.seed = Rng::derive(master_seed, 11);
  f.done();
  return cfg;
}

// Update vectors for codec-only experiments: synthetic generators or one
// round of real local-training deltas from a fresh task.
std::vector<std::vector<double>> parse_updates(ConfigView& parent,
                                               uint64_t master_seed) {
  ConfigView u = parent.section("updates");
  std::string source = u.str("source");
  std::vector<std::vector<double>> updates;
  if (source == "task") {
    TaskSpec spec = parse_task(u, master_seed);
    double lr = u.number("client_lr");
    uint32_t batch = static_cast<uint32_t>(u.uint("batch_size", 32));
    uint32_t epochs = static_cast<uint32_t>(u.uint("local_epochs", 1));
    bool weighted = u.boolean("weighted", true);
    u.done();
    FederatedTask task = generate_task(spec);
    std::vector<double> theta =
        init_params(spec, Rng::derive(master_seed, 12));
    updates.reserve(task.clients.size());
    for (size_t k = 0; k < task.clients.size(); ++k) {
      Rng rng(Rng::derive(master_seed, 13, k));
      std::vector<double> theta_k =
          local_train(spec, theta, task.clients[k], epochs, lr, batch, rng);
      double w = weighted ? static_cast<double>(task.clients[k].size()) : 1.0;
      for (size_t i = 0; i < theta_k.size(); ++i)
        theta_k[i] = w * (theta_k[i] - theta[i]);
      updates.push_back(std::move(theta_k));
    }
    return updates;
  }

  uint64_t count = u.uint("count");
  uint64_t dim = u.uint("dim");
  if (count < 1) throw ConfigError(u.path() + ".count must be >= 1");
  auto gen_seed = [&](size_t i) { return Rng::derive(master_seed, 14, i); };
  if (source == "power_law") {
    double alpha = u.number("alpha");
    double zero_fraction = u.number("zero_fraction", 0.0);
    double scale = u.number("scale", 1.0);
    if (zero_fraction < 0.0 || zero_fraction >= 1.0)
      throw ConfigError(u.path() + ".zero_fraction must be in [0, 1)");
    u.done();
    for (size_t i = 0; i < count; ++i) {
      Rng rng(gen_seed(i));
      updates.push_back(power_law_vector(dim, alpha, zero_fraction, scale, rng));
    }
  } else if (source == "laplace") {
    double scale = u.number("scale");
    double zero_fraction = u.number("zero_fraction", 0.0);
    if (zero_fraction < 0.0 || zero_fraction >= 1.0)
      throw ConfigError(u.path() + ".zero_fraction must be in [0, 1)");
    u.done();
    for (size_t i = 0; i < count; ++i) {
      Rng rng(gen_seed(i));
      updates.push_back(laplace_vector(dim, scale, zero_fraction, rng));
    }
  } else if (source == "gaussian") {
    double sigma = u.number("sigma");
    u.done();
    for (size_t i = 0; i < count; ++i) {
      Rng rng(gen_seed(i));
      updates.push_back(gaussian_vector(dim, sigma, rng));
    }
  } else if (source == "lognormal_norm") {
    // Gaussian directions with log-normal total norms (normalization
    // ablation's client population).
    double sigma_log = u.number("sigma_log", 1.0);
    u.done();
    for (size_t i = 0; i < count; ++i) {
      Rng rng(gen_seed(i));
      std::vector<double> v = gaussian_vector(dim, 1.0, rng);
      auto [unit, norm] = normalize(v);
      double r = std::exp(sigma_log * rng.normal());
      for (double& x : unit) x *= r;
      updates.push_back(std::move(unit));
    }
  } else {
    throw ConfigError(u.path() + ".source: unknown source '" + source + "'");
  }
  return updates;
}

std::string make_manifest(const std::string& name, const json& config,
                          json extra = json::object()) {
  json m;
  m["experiment"] = name;
  m["config"] = config;
  m["container_format_version"] = kFormatVersion;
  m["units"] = {{"rate", "bits/element"},
                {"distortion", "squared error/element"},
                {"entropy", "bits/symbol"}};
  for (auto& item : extra.items()) m[item.key()] = item.value();
  return m.dump(2) + "\n";
}

struct CommonCodecConfig {
  uint64_t master_seed = 0;
  std::vector<double> grid;
  std::vector<std::vector<double>> updates;
  Code code = Code::gamma;
  Quantizer quantizer = Quantizer::stochastic;
};

CommonCodecConfig parse_common(ConfigView& cfg, bool with_quantizer = true) {
  CommonCodecConfig out;
  out.master_seed = cfg.uint("master_seed");
  out.grid = parse_grid(cfg);
  out.updates = parse_updates(cfg, out.master_seed);
  out.code = parse_code(cfg.str("code", "gamma"), cfg.path());
  if (with_quantizer)
    out.quantizer =
        parse_quantizer(cfg.str("quantizer", "stochastic"), cfg.path());
  return out;
}

// Mean payload rate and distortion per element of the normalized scheme at
// one step, with fixed per-update draws; +32 bits/update of norm side info.
std::pair<double, double> normalized_point(
    const std::vector<std::vector<double>>& updates, double delta,
    uint64_t seed, size_t grid_index, Code code, Quantizer quantizer) {
  double rate = 0.0;
  double dist = 0.0;
  for (size_t i = 0; i < updates.size(); ++i) {
    const std::vector<double>& u = updates[i];
    double d = static_cast<double>(u.size());
    auto [unit, norm] = normalize(u);
    Rng rng(Rng::derive(seed, 1000 + i, grid_index));
    RdDraw draw = rd_evaluate(unit, delta, rng, code, quantizer);
    // Scaling the decode by the norm scales the error linearly.
    rate += (static_cast<double>(draw.payload_bits) + 32.0) / d;
    dist += norm * norm * draw.squared_error / d;
  }
  double n = static_cast<double>(updates.size());
  return {rate / n, dist / n};
}

}  // namespace

ExperimentOutput run_rd_sweep(const std::string& config_json) {
  json config = parse_json(config_json);
  ConfigView cfg(config, "config");
  CommonCodecConfig c = parse_common(cfg);
  bool has_budget = cfg.has("budget_bits_per_elem");
  double budget = cfg.number("budget_bits_per_elem", 0.0);
  if (has_budget && budget <= 0.0)
    throw ConfigError("config.budget_bits_per_elem must be > 0");
  cfg.done();

  std::vector<RdPoint> rows = rd_sweep(c.updates, c.grid,
                                       Rng::derive(c.master_seed, 20),
                                       c.code, c.quantizer);
  std::string csv =
      "delta,mean_rate_bits_per_elem,mean_distortion_per_elem,"
      "mean_entropy_bits\n";
  for (const RdPoint& r : rows)
    csv += fmt(r.delta) + "," + fmt(r.mean_rate_bits_per_elem) + "," +
           fmt(r.mean_distortion_per_elem) + "," + fmt(r.mean_entropy_bits) +
           "\n";
  json extra;
  if (has_budget) {
    extra["budget_bits_per_elem"] = budget;
    extra["selected_delta"] = select_delta_for_budget(rows, budget);
  }
  return {csv, make_manifest("rd_sweep", config, extra)};
}

ExperimentOutput run_vote(const std::string& config_json) {
  json config = parse_json(config_json);
  ConfigView cfg(config, "config");
  double lambda = cfg.number("lambda");
  if (lambda < 0.0) throw ConfigError("config.lambda must be >= 0");
  CommonCodecConfig c = parse_common(cfg);
  cfg.done();

  std::vector<uint64_t> histogram =
      vote_histogram(c.updates, c.grid, lambda,
                     Rng::derive(c.master_seed, 21), c.code, c.quantizer);
  std::string csv = "delta,votes\n";
  uint64_t total = 0;
  for (size_t j = 0; j < c.grid.size(); ++j) {
    csv += fmt(c.grid[j]) + "," + std::to_string(histogram[j]) + "\n";
    total += histogram[j];
  }
  size_t winner = vote_winner(histogram);
  json extra;
  extra["lambda"] = lambda;
  extra["winner_delta"] = c.grid[winner];
  extra["modal_fraction"] =
      static_cast<double>(histogram[winner]) / static_cast<double>(total);
  return {csv, make_manifest("vote", config, extra)};
}

ExperimentOutput run_train(const std::string& config_json) {
  json config = parse_json(config_json);
  ConfigView cfg(config, "config");
  uint64_t master_seed = cfg.uint("master_seed");
  TaskSpec spec = parse_task(cfg, master_seed);
  FedConfig fed = parse_fed(cfg, master_seed);
  fed.compressor = parse_compressor(cfg.raw("compressor"), "config.compressor");
  cfg.done();

  FederatedTask task = generate_task(spec);
  TrainingTrace trace = run_training(task, fed);
  json extra;
  extra["final_accuracy"] = trace.rounds.back().eval_accuracy;
  extra["final_train_loss"] = trace.rounds.back().train_loss;
  extra["cumulative_upstream_bits"] =
      trace.rounds.back().cumulative_upstream_bits;
  return {trace_to_csv(trace), make_manifest("train", config, extra)};
}

ExperimentOutput run_compare(const std::string& config_json) {
  json config = parse_json(config_json);
  ConfigView cfg(config, "config");
  uint64_t master_seed = cfg.uint("master_seed");
  TaskSpec spec = parse_task(cfg, master_seed);
  FedConfig fed = parse_fed(cfg, master_seed);
  const json& methods = cfg.raw("methods");
  if (!methods.is_array() || methods.empty())
    throw ConfigError("config.methods must be a non-empty array");
  cfg.done();

  FederatedTask task = generate_task(spec);
  std::string csv =
      "method,param,mean_rate_bits_per_elem,final_accuracy,final_train_loss,"
      "cumulative_upstream_bits\n";
  for (size_t i = 0; i < methods.size(); ++i) {
    FedConfig run_cfg = fed;
    run_cfg.compressor = parse_compressor(
        methods[i], "config.methods[" + std::to_string(i) + "]");
    TrainingTrace trace = run_training(task, run_cfg);
    double mean_rate = 0.0;
    for (const RoundRecord& r : trace.rounds)
      mean_rate += r.mean_rate_bits_per_elem;
    mean_rate /= static_cast<double>(trace.rounds.size());
    const RoundRecord& last = trace.rounds.back();
    csv += compressor_name(run_cfg.compressor) + "," +
           fmt(compressor_param(run_cfg.compressor)) + "," + fmt(mean_rate) +
           "," + fmt(last.eval_accuracy) + "," + fmt(last.train_loss) + "," +
           std::to_string(last.cumulative_upstream_bits) + "\n";
  }
  return {csv, make_manifest("compare", config)};
}

ExperimentOutput run_rotation_ablation(const std::string& config_json) {
  json config = parse_json(config_json);
  ConfigView cfg(config, "config");
  CommonCodecConfig c = parse_common(cfg);
  cfg.done();

  uint64_t seed = Rng::derive(c.master_seed, 22);
  uint64_t rotation_seed = Rng::derive(c.master_seed, 23);
  std::string csv =
      "delta,mean_rate_plain_bits_per_elem,mean_rate_rotated_bits_per_elem,"
      "mean_distortion_plain_per_elem,mean_distortion_rotated_per_elem,"
      "mean_entropy_plain_bits,mean_entropy_rotated_bits\n";
  for (size_t j = 0; j < c.grid.size(); ++j) {
    double rate_p = 0, rate_r = 0, dist_p = 0, dist_r = 0, ent_p = 0,
           ent_r = 0;
    for (size_t i = 0; i < c.updates.size(); ++i) {
      const std::vector<double>& u = c.updates[i];
      double d = static_cast<double>(u.size());
      Rng rng_p(Rng::derive(seed, 2 * i, j));
      RdDraw plain = rd_evaluate(u, c.grid[j], rng_p, c.code, c.quantizer);
      rate_p += static_cast<double>(plain.payload_bits) / d;
      dist_p += plain.squared_error / d;
      ent_p += plain.entropy_bits;

      std::vector<double> y = randomized_hadamard(u, rotation_seed);
      Rng rng_r(Rng::derive(seed, 2 * i + 1, j));
      float fstep = static_cast<float>(c.grid[j]);
      uint64_t dither =
          c.quantizer == Quantizer::dithered ? rng_r.next_u64() : 0;
      std::vector<int64_t> q = quantize(y, static_cast<double>(fstep),
                                        c.quantizer, rng_r, dither);
      BitString payload = encode_symbols(q, c.code);
      std::vector<double> y_hat = dequantize_symbols(
          q, static_cast<double>(fstep), c.quantizer, dither);
      // End-to-end distortion back in the model domain.
      std::vector<double> u_hat = inverse_hadamard(y_hat, rotation_seed,
                                                   u.size());
      rate_r += static_cast<double>(payload.size()) / d;
      dist_r += distortion(u, u_hat) / d;
      ent_r += y.empty() ? 0.0 : symbol_stats(q).entropy_bits;
    }
    double n = static_cast<double>(c.updates.size());
    csv += fmt(c.grid[j]) + "," + fmt(rate_p / n) + "," + fmt(rate_r / n) +
           "," + fmt(dist_p / n) + "," + fmt(dist_r / n) + "," +
           fmt(ent_p / n) + "," + fmt(ent_r / n) + "\n";
  }
  return {csv, make_manifest("rotation_ablation", config)};
}

ExperimentOutput run_normalization_ablation(const std::string& config_json) {
  json config = parse_json(config_json);
  ConfigView cfg(config, "config");
  double tolerance = cfg.number("rate_match_tolerance", 0.005);
  CommonCodecConfig c = parse_common(cfg);
  cfg.done();

  uint64_t seed = Rng::derive(c.master_seed, 24);
  std::string csv =
      "delta,mean_rate_fixed_bits_per_elem,mean_distortion_fixed_per_elem,"
      "delta_normalized,mean_rate_normalized_bits_per_elem,"
      "mean_distortion_normalized_per_elem\n";
  for (size_t j = 0; j < c.grid.size(); ++j) {
    double rate_f = 0.0;
    double dist_f = 0.0;
    for (size_t i = 0; i < c.updates.size(); ++i) {
      const std::vector<double>& u = c.updates[i];
      double d = static_cast<double>(u.size());
      Rng rng(Rng::derive(seed, i, j));
      RdDraw draw = rd_evaluate(u, c.grid[j], rng, c.code, c.quantizer);
      rate_f += static_cast<double>(draw.payload_bits) / d;
      dist_f += draw.squared_error / d;
    }
    double n = static_cast<double>(c.updates.size());
    rate_f /= n;
    dist_f /= n;

    // Pick the normalized scheme's step by bisection so its mean rate lands
    // on the fixed scheme's. The rate is monotone in the step and the draws
    // are pinned per (update, grid row), so this is deterministic.
    double lo = 1e-9;
    double hi = 1e9;
    double delta_n = c.grid[j];
    double rate_n = 0.0;
    double dist_n = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      delta_n = std::sqrt(lo * hi);
      std::tie(rate_n, dist_n) = normalized_point(c.updates, delta_n, seed, j,
                                                  c.code, c.quantizer);
      if (std::abs(rate_n - rate_f) <= tolerance * rate_f) break;
      if (rate_n > rate_f) lo = delta_n;  // too fine: rate too high
      else hi = delta_n;
    }
    csv += fmt(c.grid[j]) + "," + fmt(rate_f) + "," + fmt(dist_f) + "," +
           fmt(delta_n) + "," + fmt(rate_n) + "," + fmt(dist_n) + "\n";
  }
  return {csv, make_manifest("normalization_ablation", config)};
}

ExperimentOutput run_rounding_compare(const std::string& config_json) {
  json config = parse_json(config_json);
  ConfigView cfg(config, "config");
  CommonCodecConfig c = parse_common(cfg, /*with_quantizer=*/false);
  cfg.done();

  uint64_t seed = Rng::derive(c.master_seed, 25);
  const Quantizer methods[] = {Quantizer::round, Quantizer::stochastic,
                               Quantizer::dithered};
  const char* names[] = {"round", "stochastic", "dithered"};
  std::string csv =
      "delta,quantizer,mean_rate_bits_per_elem,mean_distortion_per_elem\n";
  for (size_t j = 0; j < c.grid.size(); ++j) {
    for (size_t q = 0; q < 3; ++q) {
      double rate = 0.0;
      double dist = 0.0;
      for (size_t i = 0; i < c.updates.size(); ++i) {
        const std::vector<double>& u = c.updates[i];
        double d = static_cast<double>(u.size());
        Rng rng(Rng::derive(seed, i * 3 + q, j));
        RdDraw draw = rd_evaluate(u, c.grid[j], rng, c.code, methods[q]);
        rate += static_cast<double>(draw.payload_bits) / d;
        dist += draw.squared_error / d;
      }
      double n = static_cast<double>(c.updates.size());
      csv += fmt(c.grid[j]) + std::string(",") + names[q] + "," +
             fmt(rate / n) + "," + fmt(dist / n) + "\n";
    }
  }
  return {csv, make_manifest("rounding_compare", config)};
}

ExperimentOutput run_experiment(const std::string& name,
                                const std::string& config_json) {
  if (name == "rd_sweep") return run_rd_sweep(config_json);
  if (name == "vote") return run_vote(config_json);
  if (name == "train") return run_train(config_json);
  if (name == "compare") return run_compare(config_json);
  if (name == "rotation_ablation") return run_rotation_ablation(config_json);
  if (name == "normalization_ablation")
    return run_normalization_ablation(config_json);
  if (name == "rounding_compare") return run_rounding_compare(config_json);
  throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace fedcodec
