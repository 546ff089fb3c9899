#include "ilm/manifest.hpp"

#include "ilm/config.hpp"
#include "ilm/csv.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace ilm {

namespace {

std::string now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string manifest_text(const ExperimentConfig& cfg,
                          const BaselineEstimate& baseline,
                          const std::string& created) {
  std::string out;
  auto kv = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("tool", std::string("ilm ") + kToolVersion);
  kv("csv_schema_version", std::to_string(kCsvSchemaVersion));
  kv("rng", kRngId);
  kv("created", created);
  kv("master_seed", std::to_string(cfg.seed));
  kv("model", to_string(cfg.model));
  kv("n", std::to_string(cfg.n));
  kv("hidden", std::to_string(cfg.effective_hidden()));
  kv("bottleneck", std::to_string(cfg.bottleneck));
  kv("auto_size", std::to_string(cfg.effective_auto_size()));
  kv("auto_mode", to_string(cfg.auto_mode));
  kv("auto_direction", to_string(cfg.auto_direction));
  kv("r", std::to_string(cfg.r));
  kv("eta", format_g6(cfg.effective_eta()));
  kv("loss", to_string(cfg.loss));
  kv("epochs", std::to_string(cfg.epochs));
  kv("generations", std::to_string(cfg.generations));
  kv("replicates", std::to_string(cfg.replicates));
  kv("lambda", format_g6(cfg.lambda));
  kv("generation_cap", std::to_string(cfg.generation_cap));
  kv("force_obversion", cfg.force_obversion ? "true" : "false");
  kv("record_timing", cfg.record_timing ? "true" : "false");
  kv("loss_divisor", format_g6(cfg.effective_loss_divisor()));
  kv("metric_sample", std::to_string(cfg.metric_sample));
  kv("baseline_agents", std::to_string(baseline.agents_used));
  kv("baseline_pairs", std::to_string(baseline.pairs_used));
  kv("baseline_x0", format_g6(baseline.x0));
  kv("baseline_c0", format_g6(baseline.c0));
  kv("baseline_s0", format_g6(baseline.s0));
  std::string seeds;
  for (int i = 0; i < cfg.replicates; ++i) {
    if (i) seeds += ',';
    seeds += std::to_string(derive_seed(cfg.seed, static_cast<uint64_t>(i), "init"));
  }
  kv("replicate_init_seeds", seeds);
  return out;
}

void write_manifest(const ExperimentConfig& cfg,
                    const BaselineEstimate& baseline,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << manifest_text(cfg, baseline, now_iso8601());
}

}  // namespace ilm
