// fedcodec: compression toolkit + federated-learning simulator CLI.
//
// Exit codes: 0 success, 2 config/usage error, 3 I/O error, 4 infeasible
// budget, 5 corrupt stream, 1 anything else.
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "fedcodec/baselines.hpp"
#include "fedcodec/codec.hpp"
#include "fedcodec/errors.hpp"
#include "fedcodec/experiments.hpp"
#include "fedcodec/io.hpp"

namespace {

using namespace fedcodec;

Quantizer quantizer_from_name(const std::string& name) {
  if (name == "round") return Quantizer::round;
  if (name == "stochastic") return Quantizer::stochastic;
  if (name == "dithered") return Quantizer::dithered;
  throw ConfigError("unknown quantizer '" + name + "'");
}

Code code_from_name(const std::string& name) {
  if (name == "gamma") return Code::gamma;
  if (name == "delta") return Code::delta;
  throw ConfigError("unknown code '" + name + "'");
}

struct ExperimentArgs {
  std::string config_path;
  std::string output_path;
  std::string manifest_path;
};

void add_experiment_command(CLI::App& app, const char* name,
                            const char* description,
                            const std::string& experiment,
                            const ExperimentArgs*& selected,
                            std::string& selected_name) {
  auto args = std::make_shared<ExperimentArgs>();
  CLI::App* cmd = app.add_subcommand(name, description);
  cmd->add_option("-c,--config", args->config_path, "experiment config JSON")
      ->required();
  cmd->add_option("-o,--output", args->output_path, "output CSV path")
      ->required();
  cmd->add_option("--manifest", args->manifest_path,
                  "manifest path (default: <output>.manifest.json)");
  cmd->callback([&selected, &selected_name, args, experiment]() {
    selected = args.get();
    selected_name = experiment;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fedcodec: stochastic-rounding + Elias-gamma update codec, "
               "baselines, and a desk-scale federated training simulator"};
  app.require_subcommand(1);

  // encode
  std::string in_path, out_path;
  double delta = 1.0;
  std::string quantizer_name = "stochastic";
  std::string code_name_arg = "gamma";
  uint64_t seed = 0;
  CLI::App* enc = app.add_subcommand(
      "encode", "encode a vector file (FVEC) into a codec container");
  enc->add_option("-i,--input", in_path, "input .fvec file")->required();
  enc->add_option("-o,--output", out_path, "output container file")
      ->required();
  enc->add_option("-d,--delta", delta, "quantization step")->required();
  enc->add_option("-q,--quantizer", quantizer_name,
                  "round | stochastic | dithered");
  enc->add_option("--code", code_name_arg, "gamma | delta");
  enc->add_option("--seed", seed, "randomness seed");

  // decode
  CLI::App* dec = app.add_subcommand(
      "decode", "decode a container (any scheme) back to a vector file");
  dec->add_option("-i,--input", in_path, "input container file")->required();
  dec->add_option("-o,--output", out_path, "output .fvec file")->required();

  const ExperimentArgs* experiment_args = nullptr;
  std::string experiment_name;
  add_experiment_command(app, "rd-sweep",
                         "rate-distortion sweep over a delta grid",
                         "rd_sweep", experiment_args, experiment_name);
  add_experiment_command(app, "vote",
                         "per-client Lagrangian votes over a delta grid",
                         "vote", experiment_args, experiment_name);
  add_experiment_command(app, "train",
                         "federated training run with one compressor",
                         "train", experiment_args, experiment_name);
  add_experiment_command(app, "compare",
                         "accuracy-rate frontier across compressors",
                         "compare", experiment_args, experiment_name);
  add_experiment_command(app, "ablate-rotation",
                         "entropy/distortion with and without rotation",
                         "rotation_ablation", experiment_args,
                         experiment_name);
  add_experiment_command(app, "ablate-normalization",
                         "fixed-step vs per-client-normalized coding",
                         "normalization_ablation", experiment_args,
                         experiment_name);
  add_experiment_command(app, "rounding-compare",
                         "rounding methods across step sizes",
                         "rounding_compare", experiment_args, experiment_name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (enc->parsed()) {
      if (!(delta > 0.0)) throw ConfigError("--delta must be positive");
      std::vector<double> v = read_vector_file(in_path);
      Rng rng(seed);
      EncodedUpdate e = encode_update(v, delta, rng,
                                      code_from_name(code_name_arg),
                                      quantizer_from_name(quantizer_name));
      write_bytes(out_path, serialize(e));
      RateReport rate = rate_of(e);
      std::printf("encoded %zu elements: %llu payload bits (%.4g bits/elem "
                  "incl. header)\n",
                  v.size(),
                  static_cast<unsigned long long>(rate.payload_bits),
                  rate.bits_per_element);
      return 0;
    }
    if (dec->parsed()) {
      EncodedUpdate e = deserialize_update(read_bytes(in_path));
      std::vector<double> v = decode_container(e);
      write_vector_file(out_path, v);
      std::printf("decoded %zu elements\n", v.size());
      return 0;
    }
    if (experiment_args != nullptr) {
      ExperimentOutput out = run_experiment(
          experiment_name, read_text(experiment_args->config_path));
      write_text(experiment_args->output_path, out.csv);
      std::string manifest_path =
          experiment_args->manifest_path.empty()
              ? experiment_args->output_path + ".manifest.json"
              : experiment_args->manifest_path;
      write_text(manifest_path, out.manifest);
      std::printf("wrote %s and %s\n", experiment_args->output_path.c_str(),
                  manifest_path.c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const InfeasibleBudgetError& e) {
    std::fprintf(stderr, "infeasible budget: %s\n", e.what());
    return 4;
  } catch (const CorruptStreamError& e) {
    std::fprintf(stderr, "corrupt stream: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
