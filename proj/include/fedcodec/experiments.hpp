#pragma once

#include <string>

namespace fedcodec {

// Config-driven experiment drivers behind the CLI subcommands. Configs are
// JSON (schema in README.md); every driver validates strictly — unknown keys
// are a ConfigError, never silently defaulted — and all randomness derives
// from the config's master_seed. Outputs are deterministic for a fixed
// config.
struct ExperimentOutput {
  std::string csv;       // one result table, units in the header row
  std::string manifest;  // JSON echo of config + seeds + format versions
};

ExperimentOutput run_rd_sweep(const std::string& config_json);
ExperimentOutput run_vote(const std::string& config_json);
ExperimentOutput run_train(const std::string& config_json);
ExperimentOutput run_compare(const std::string& config_json);
ExperimentOutput run_rotation_ablation(const std::string& config_json);
ExperimentOutput run_normalization_ablation(const std::string& config_json);
ExperimentOutput run_rounding_compare(const std::string& config_json);

// Dispatch by experiment name ("rd_sweep", "vote", "train", "compare",
// "rotation_ablation", "normalization_ablation", "rounding_compare").
ExperimentOutput run_experiment(const std::string& name,
                                const std::string& config_json);

}  // namespace fedcodec
