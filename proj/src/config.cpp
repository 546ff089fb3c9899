#include "ilm/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace ilm {

ModelKind parse_model(const std::string& value) {
  if (value == "oilm") return ModelKind::oilm;
  if (value == "ailm") return ModelKind::ailm;
  if (value == "oneway") return ModelKind::oneway;
  throw ConfigError("model: expected oilm|ailm|oneway, got '" + value + "'");
}

AutoMode parse_auto_mode(const std::string& value) {
  if (value == "shared") return AutoMode::shared;
  if (value == "independent") return AutoMode::independent;
  throw ConfigError("auto_mode: expected shared|independent, got '" + value +
                    "'");
}

AutoDirection parse_auto_direction(const std::string& value) {
  if (value == "m2m") return AutoDirection::m2m;
  if (value == "s2s") return AutoDirection::s2s;
  if (value == "both") return AutoDirection::both;
  throw ConfigError("auto_direction: expected m2m|s2s|both, got '" + value +
                    "'");
}

Loss parse_loss(const std::string& value) {
  if (value == "cross_entropy") return Loss::cross_entropy;
  if (value == "squared_error") return Loss::squared_error;
  throw ConfigError("loss: expected cross_entropy|squared_error, got '" +
                    value + "'");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true|false, got '" + value + "'");
}

void set_key(ConfigPatch& patch, const std::string& key,
             const std::string& value) {
  if (key == "model") patch.model = value;
  else if (key == "auto_mode") patch.auto_mode = value;
  else if (key == "auto_direction") patch.auto_direction = value;
  else if (key == "loss") patch.loss = value;
  else if (key == "n") patch.n = parse_int(key, value);
  else if (key == "hidden") patch.hidden = parse_int(key, value);
  else if (key == "bottleneck") patch.bottleneck = parse_int(key, value);
  else if (key == "auto_size") patch.auto_size = parse_int(key, value);
  else if (key == "r") patch.r = parse_int(key, value);
  else if (key == "epochs") patch.epochs = parse_int(key, value);
  else if (key == "generations") patch.generations = parse_int(key, value);
  else if (key == "replicates") patch.replicates = parse_int(key, value);
  else if (key == "generation_cap") patch.generation_cap = parse_int(key, value);
  else if (key == "threads") patch.threads = parse_int(key, value);
  else if (key == "metric_sample") patch.metric_sample = parse_int(key, value);
  else if (key == "eta") patch.eta = parse_real(key, value);
  else if (key == "lambda") patch.lambda = parse_real(key, value);
  else if (key == "loss_divisor") patch.loss_divisor = parse_real(key, value);
  else if (key == "seed") patch.seed = parse_u64(key, value);
  else if (key == "force_obversion") patch.force_obversion = parse_bool(key, value);
  else if (key == "record_timing") patch.record_timing = parse_bool(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

ConfigPatch parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ConfigPatch patch;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    try {
      set_key(patch, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return patch;
}

void apply_patch(ExperimentConfig& cfg, const ConfigPatch& patch) {
  if (patch.model) cfg.model = parse_model(*patch.model);
  if (patch.auto_mode) cfg.auto_mode = parse_auto_mode(*patch.auto_mode);
  if (patch.auto_direction)
    cfg.auto_direction = parse_auto_direction(*patch.auto_direction);
  if (patch.loss) cfg.loss = parse_loss(*patch.loss);
  if (patch.n) cfg.n = *patch.n;
  if (patch.hidden) cfg.hidden = *patch.hidden;
  if (patch.bottleneck) cfg.bottleneck = *patch.bottleneck;
  if (patch.auto_size) cfg.auto_size = *patch.auto_size;
  if (patch.r) cfg.r = *patch.r;
  if (patch.epochs) cfg.epochs = *patch.epochs;
  if (patch.generations) cfg.generations = *patch.generations;
  if (patch.replicates) cfg.replicates = *patch.replicates;
  if (patch.generation_cap) cfg.generation_cap = *patch.generation_cap;
  if (patch.threads) cfg.threads = *patch.threads;
  if (patch.metric_sample) cfg.metric_sample = *patch.metric_sample;
  if (patch.eta) cfg.eta = *patch.eta;
  if (patch.lambda) cfg.lambda = *patch.lambda;
  if (patch.loss_divisor) cfg.loss_divisor = *patch.loss_divisor;
  if (patch.seed) cfg.seed = *patch.seed;
  if (patch.force_obversion) cfg.force_obversion = *patch.force_obversion;
  if (patch.record_timing) cfg.record_timing = *patch.record_timing;
}

ExperimentConfig build_config(const std::optional<std::string>& file,
                              const ConfigPatch& flags) {
  ExperimentConfig cfg;
  if (file) apply_patch(cfg, parse_config_file(*file));
  apply_patch(cfg, flags);
  validate(cfg);
  return cfg;
}

}  // namespace ilm
