#include "fedcodec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedcodec {
namespace {

// Marsaglia-Tsang; boosts shapes below 1 through Gamma(a+1) * U^(1/a).
double gamma_sample(Rng& rng, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_sample: shape <= 0");
  if (a < 1.0) {
    double u = 1.0 - rng.next_unit();  // (0, 1]
    return gamma_sample(rng, a + 1.0) * std::pow(u, 1.0 / a);
  }
  double d = a - 1.0 / 3.0;
  double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x = rng.normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = 1.0 - rng.next_unit();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

// Beta(a, a); a = +inf degenerates to exactly 1/2.
double symmetric_beta(Rng& rng, double a) {
  if (!std::isfinite(a)) return 0.5;
  double g1 = gamma_sample(rng, a);
  double g2 = gamma_sample(rng, a);
  double sum = g1 + g2;
  return sum > 0.0 ? g1 / sum : 0.5;
}

// Per-row score of the model; for the MLP also fills the hidden activations.
double score(const TaskSpec& spec, std::span<const double> w,
             std::span<const double> x, std::vector<double>* hidden) {
  if (spec.kind != TaskKind::small_mlp) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
    return s;
  }
  size_t in = spec.dimension;
  size_t h = spec.hidden;
  const double* w1 = w.data();
  const double* b1 = w.data() + h * in;
  const double* w2 = b1 + h;
  double b2 = w2[h];
  if (hidden) hidden->resize(h);
  double s = b2;
  for (size_t j = 0; j < h; ++j) {
    double z = b1[j];
    for (size_t i = 0; i < in; ++i) z += w1[j * in + i] * x[i];
    double t = std::tanh(z);
    if (hidden) (*hidden)[j] = t;
    s += w2[j] * t;
  }
  return s;
}

bool is_classification(TaskKind kind) {
  return kind != TaskKind::linear_regression;
}

// Stable log(1 + e^s).
double softplus(double s) {
  return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

void fill_classification_rows(const TaskSpec& spec, Dataset& ds, size_t rows,
                              double prior, bool flip_labels,
                              std::span<const double> direction, Rng& rng) {
  ds.dim = spec.dimension;
  ds.x.reserve(ds.x.size() + rows * spec.dimension);
  ds.y.reserve(ds.y.size() + rows);
  for (size_t r = 0; r < rows; ++r) {
    double y = rng.next_unit() < prior ? 1.0 : 0.0;
    double mean = (2.0 * y - 1.0) * spec.margin;
    for (size_t i = 0; i < spec.dimension; ++i)
      ds.x.push_back(mean * direction[i] + rng.normal());
    if (flip_labels && rng.next_unit() < spec.noise) y = 1.0 - y;
    ds.y.push_back(y);
  }
}

void fill_regression_rows(const TaskSpec& spec, Dataset& ds, size_t rows,
                          std::span<const double> shift,
                          std::span<const double> direction, Rng& rng) {
  ds.dim = spec.dimension;
  ds.x.reserve(ds.x.size() + rows * spec.dimension);
  ds.y.reserve(ds.y.size() + rows);
  for (size_t r = 0; r < rows; ++r) {
    double target = 0.0;
    for (size_t i = 0; i < spec.dimension; ++i) {
      double x = (shift.empty() ? 0.0 : shift[i]) + rng.normal();
      ds.x.push_back(x);
      target += direction[i] * x;
    }
    ds.y.push_back(target + spec.noise * rng.normal());
  }
}

}  // namespace

std::vector<uint32_t> power_law_sizes(size_t count, double exponent,
                                      uint32_t lo, uint32_t hi, Rng& rng) {
  if (!(exponent > 0.0) || lo < 1 || hi < lo)
    throw std::invalid_argument("power_law_sizes: bad law parameters");
  double tail = 1.0 - std::pow(static_cast<double>(lo) / hi, exponent);
  std::vector<uint32_t> sizes(count);
  for (size_t k = 0; k < count; ++k) {
    double u = rng.next_unit();
    double x = lo * std::pow(1.0 - u * tail, -1.0 / exponent);
    sizes[k] = static_cast<uint32_t>(
        std::clamp(std::floor(x), static_cast<double>(lo),
                   static_cast<double>(hi)));
  }
  return sizes;
}

double power_law_cdf(double x, double exponent, double lo, double hi) {
  if (x < lo) return 0.0;
  if (x >= hi) return 1.0;
  double tail = 1.0 - std::pow(lo / hi, exponent);
  if (tail == 0.0) return 1.0;
  return (1.0 - std::pow(lo / x, exponent)) / tail;
}

FederatedTask generate_task(const TaskSpec& spec) {
  if (spec.dimension < 1 || spec.num_clients < 1)
    throw std::invalid_argument("generate_task: empty task");
  if (spec.kind == TaskKind::small_mlp && spec.hidden < 1)
    throw std::invalid_argument("generate_task: mlp needs a hidden layer");
  if (!(spec.label_skew > 0.0))
    throw std::invalid_argument("generate_task: label_skew must be positive");

  FederatedTask task;
  task.spec = spec;

  Rng direction_rng(Rng::derive(spec.master_seed, 1));
  task.direction.resize(spec.dimension);
  double sq = 0.0;
  for (double& e : task.direction) {
    e = direction_rng.normal();
    sq += e * e;
  }
  double inv = sq > 0.0 ? 1.0 / std::sqrt(sq) : 0.0;
  for (double& e : task.direction) e *= inv;

  Rng size_rng(Rng::derive(spec.master_seed, 2));
  std::vector<uint32_t> sizes =
      power_law_sizes(spec.num_clients, spec.size_exponent, spec.min_examples,
                      spec.max_examples, size_rng);

  task.clients.resize(spec.num_clients);
  for (uint32_t k = 0; k < spec.num_clients; ++k) {
    Rng skew_rng(Rng::derive(spec.master_seed, 3, k));
    Rng data_rng(Rng::derive(spec.master_seed, 4, k));
    if (is_classification(spec.kind)) {
      double prior = symmetric_beta(skew_rng, spec.label_skew);
      fill_classification_rows(spec, task.clients[k], sizes[k], prior, true,
                               task.direction, data_rng);
    } else {
      // Feature-mean shift of scale 1/sqrt(label_skew); vanishes in the
      // homogeneous limit.
      std::vector<double> shift(spec.dimension);
      double scale = std::isfinite(spec.label_skew)
                         ? 1.0 / std::sqrt(spec.label_skew)
                         : 0.0;
      for (double& s : shift) s = scale * skew_rng.normal();
      fill_regression_rows(spec, task.clients[k], sizes[k], shift,
                           task.direction, data_rng);
    }
  }

  Rng eval_rng(Rng::derive(spec.master_seed, 5));
  if (is_classification(spec.kind)) {
    fill_classification_rows(spec, task.eval, spec.eval_examples, 0.5, false,
                             task.direction, eval_rng);
  } else {
    fill_regression_rows(spec, task.eval, spec.eval_examples, {},
                         task.direction, eval_rng);
  }
  return task;
}

size_t param_count(const TaskSpec& spec) {
  if (spec.kind != TaskKind::small_mlp) return spec.dimension;
  return static_cast<size_t>(spec.hidden) * spec.dimension + spec.hidden +
         spec.hidden + 1;
}

std::vector<double> init_params(const TaskSpec& spec, uint64_t seed) {
  std::vector<double> w(param_count(spec), 0.0);
  if (spec.kind != TaskKind::small_mlp) return w;
  Rng rng(seed);
  size_t in = spec.dimension;
  size_t h = spec.hidden;
  double s1 = 1.0 / std::sqrt(static_cast<double>(in));
  double s2 = 1.0 / std::sqrt(static_cast<double>(h));
  for (size_t j = 0; j < h * in; ++j) w[j] = s1 * rng.normal();
  for (size_t j = 0; j < h; ++j) w[h * in + h + j] = s2 * rng.normal();
  return w;
}

double loss(const TaskSpec& spec, std::span<const double> w, const Dataset& ds,
            std::span<const size_t> idx) {
  size_t n = idx.empty() ? ds.size() : idx.size();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (size_t j = 0; j < n; ++j) {
    size_t row = idx.empty() ? j : idx[j];
    double s = score(spec, w, ds.row(row), nullptr);
    double y = ds.y[row];
    if (is_classification(spec.kind)) {
      total += softplus(s) - y * s;  // binary cross-entropy
    } else {
      double e = s - y;
      total += 0.5 * e * e;
    }
  }
  return total / static_cast<double>(n);
}

void add_gradient(const TaskSpec& spec, std::span<const double> w,
                  const Dataset& ds, std::span<const size_t> idx,
                  std::span<double> grad) {
  size_t n = idx.empty() ? ds.size() : idx.size();
  if (n == 0) return;
  double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> hidden;
  for (size_t j = 0; j < n; ++j) {
    size_t row = idx.empty() ? j : idx[j];
    std::span<const double> x = ds.row(row);
    double s = score(spec, w, x, &hidden);
    double y = ds.y[row];
    // dL/dscore for both losses.
    double g = (is_classification(spec.kind) ? sigmoid(s) : s) - y;
    g *= inv_n;
    if (spec.kind != TaskKind::small_mlp) {
      for (size_t i = 0; i < x.size(); ++i) grad[i] += g * x[i];
      continue;
    }
    size_t in = spec.dimension;
    size_t h = spec.hidden;
    const double* w2 = w.data() + h * in + h;
    double* g_w1 = grad.data();
    double* g_b1 = grad.data() + h * in;
    double* g_w2 = g_b1 + h;
    for (size_t jj = 0; jj < h; ++jj) {
      double t = hidden[jj];
      g_w2[jj] += g * t;
      double back = g * w2[jj] * (1.0 - t * t);
      g_b1[jj] += back;
      for (size_t i = 0; i < in; ++i) g_w1[jj * in + i] += back * x[i];
    }
    g_w2[h] += g;  // b2
  }
}

EvalResult evaluate(const TaskSpec& spec, std::span<const double> w,
                    const Dataset& ds) {
  EvalResult out;
  size_t n = ds.size();
  if (n == 0) return out;
  out.loss = loss(spec, w, ds, {});
  if (is_classification(spec.kind)) {
    size_t correct = 0;
    for (size_t r = 0; r < n; ++r) {
      double s = score(spec, w, ds.row(r), nullptr);
      if ((s > 0.0) == (ds.y[r] > 0.5)) ++correct;
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    return out;
  }
  double mean = 0.0;
  for (double y : ds.y) mean += y;
  mean /= static_cast<double>(n);
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (size_t r = 0; r < n; ++r) {
    double s = score(spec, w, ds.row(r), nullptr);
    ss_res += (s - ds.y[r]) * (s - ds.y[r]);
    ss_tot += (ds.y[r] - mean) * (ds.y[r] - mean);
  }
  out.accuracy = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot
                              : (ss_res == 0.0 ? 1.0 : 0.0);
  return out;
}

std::vector<double> power_law_vector(size_t d, double alpha, double zero_frac,
                                     double scale, Rng& rng) {
  if (!(alpha > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("power_law_vector: bad parameters");
  std::vector<double> u(d, 0.0);
  for (double& x : u) {
    if (rng.next_unit() < zero_frac) continue;
    double mag = scale * std::pow(1.0 - rng.next_unit(), -1.0 / alpha);
    x = rng.next_unit() < 0.5 ? -mag : mag;
  }
  return u;
}

std::vector<double> laplace_vector(size_t d, double scale, double zero_frac,
                                   Rng& rng) {
  if (!(scale > 0.0))
    throw std::invalid_argument("laplace_vector: bad scale");
  std::vector<double> u(d, 0.0);
  for (double& x : u) {
    if (rng.next_unit() < zero_frac) continue;
    double z = rng.next_unit() - 0.5;
    double mag = -scale * std::log(1.0 - 2.0 * std::abs(z));
    x = z < 0.0 ? -mag : mag;
  }
  return u;
}

std::vector<double> gaussian_vector(size_t d, double sigma, Rng& rng) {
  std::vector<double> u(d);
  for (double& x : u) x = sigma * rng.normal();
  return u;
}

}  // namespace fedcodec
