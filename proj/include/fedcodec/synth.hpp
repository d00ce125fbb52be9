#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedcodec/rng.hpp"

namespace fedcodec {

enum class TaskKind : uint8_t {
  linear_regression,
  logistic_regression,
  small_mlp,
};

// Synthetic heterogeneous federated task. `dimension` is the feature count;
// the model parameter count follows from the kind (see param_count).
struct TaskSpec {
  TaskKind kind = TaskKind::logistic_regression;
  uint32_t dimension = 32;
  uint32_t hidden = 8;  // small_mlp only
  uint32_t num_clients = 100;
  // Client example counts follow a truncated Pareto law.
  double size_exponent = 1.5;
  uint32_t min_examples = 8;
  uint32_t max_examples = 256;
  // Per-client class priors are Beta(a, a) with a = label_skew (regression:
  // feature-mean shift of scale 1/sqrt(label_skew)); larger = more homogeneous.
  double label_skew = 1.0;
  double margin = 1.3;  // class separation in feature space (classification)
  double noise = 0.05;  // label-flip probability / regression noise std
  uint32_t eval_examples = 2000;
  uint64_t master_seed = 1;
};

struct Dataset {
  uint32_t dim = 0;
  std::vector<double> x;  // size() * dim, row-major
  std::vector<double> y;  // {0,1} labels or regression targets

  size_t size() const { return y.size(); }
  std::span<const double> row(size_t i) const {
    return std::span<const double>(x).subspan(i * dim, dim);
  }
};

struct FederatedTask {
  TaskSpec spec;
  std::vector<Dataset> clients;
  Dataset eval;
  std::vector<double> direction;  // unit vector the labels are built from
};

FederatedTask generate_task(const TaskSpec& spec);

// Truncated-Pareto sizes on [lo, hi] with tail index `exponent`, via the
// inverse CDF. power_law_cdf is the sampler's own CDF for KS-style checks.
std::vector<uint32_t> power_law_sizes(size_t count, double exponent,
                                      uint32_t lo, uint32_t hi, Rng& rng);
double power_law_cdf(double x, double exponent, double lo, double hi);

// Model = flat parameter vector. Layouts:
//   linear/logistic: w[dimension]
//   small_mlp:       W1[hidden*dimension], b1[hidden], w2[hidden], b2
size_t param_count(const TaskSpec& spec);
std::vector<double> init_params(const TaskSpec& spec, uint64_t seed);

// Mean loss over the given rows (squared error for regression, binary
// cross-entropy for classification). Empty index list = all rows.
double loss(const TaskSpec& spec, std::span<const double> w, const Dataset& ds,
            std::span<const size_t> idx);

// Accumulates the mean-loss gradient over the rows into grad (not zeroed).
void add_gradient(const TaskSpec& spec, std::span<const double> w,
                  const Dataset& ds, std::span<const size_t> idx,
                  std::span<double> grad);

struct EvalResult {
  double loss = 0.0;
  // Classification: fraction correct. Regression: R^2 on the targets.
  double accuracy = 0.0;
};

EvalResult evaluate(const TaskSpec& spec, std::span<const double> w,
                    const Dataset& ds);

// Synthetic update vectors for codec-only experiments.
// Zero-inflated two-sided Pareto: with prob (1-zero_frac), sign * Pareto(alpha)
// magnitude with minimum `scale`.
std::vector<double> power_law_vector(size_t d, double alpha, double zero_frac,
                                     double scale, Rng& rng);
// Zero-inflated Laplace with the given scale b.
std::vector<double> laplace_vector(size_t d, double scale, double zero_frac,
                                   Rng& rng);
std::vector<double> gaussian_vector(size_t d, double sigma, Rng& rng);

}  // namespace fedcodec
