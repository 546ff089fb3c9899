#pragma once
// Flat key=value configuration files with # comments; command-line flags
// override file values.

#include "ilm/engine.hpp"

#include <optional>
#include <string>

namespace ilm {

inline constexpr const char* kToolVersion = "1.0.0";

// Unset fields leave the config untouched.
struct ConfigPatch {
  std::optional<std::string> model, auto_mode, auto_direction, loss;
  std::optional<int> n, hidden, bottleneck, auto_size, r, epochs, generations,
      replicates, generation_cap, threads, metric_sample;
  std::optional<double> eta, lambda, loss_divisor;
  std::optional<uint64_t> seed;
  std::optional<bool> force_obversion, record_timing;
};

ModelKind parse_model(const std::string& value);
AutoMode parse_auto_mode(const std::string& value);
AutoDirection parse_auto_direction(const std::string& value);
Loss parse_loss(const std::string& value);

// Throws ConfigError naming the offending key/value.
ConfigPatch parse_config_file(const std::string& path);
void apply_patch(ExperimentConfig& cfg, const ConfigPatch& patch);

// defaults -> file (optional) -> flags, then validate.
ExperimentConfig build_config(const std::optional<std::string>& file,
                              const ConfigPatch& flags);

}  // namespace ilm
