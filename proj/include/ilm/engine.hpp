#pragma once
// The generational loop, replicate management, threshold runs and bottleneck
// sweeps. Everything is deterministic in (config, master seed) regardless of
// how many worker threads execute the replicates.

#include "ilm/agents.hpp"
#include "ilm/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ilm {

enum class AutoMode { shared, independent };

const char* to_string(AutoMode mode);
const char* to_string(AutoDirection direction);
const char* to_string(Loss loss);

struct ExperimentConfig {
  ModelKind model = ModelKind::ailm;
  int n = 8;
  int hidden = 0;     // 0 -> n
  int bottleneck = 50;
  int auto_size = 0;  // 0 -> bottleneck (shared mode only)
  AutoMode auto_mode = AutoMode::shared;
  AutoDirection auto_direction = AutoDirection::m2m;
  int r = 20;
  double eta = 0.0;   // 0 -> model default (oilm/oneway 1.0, ailm 5.0)
  Loss loss = Loss::cross_entropy;
  int epochs = 20;
  int generations = 40;
  int replicates = 25;
  double lambda = 0.95;
  uint64_t seed = 1;
  int generation_cap = 500;  // threshold runs
  int threads = 0;           // 0 -> hardware concurrency
  bool force_obversion = false;
  bool record_timing = false;
  double loss_divisor = 0.0;  // 0 -> r; scales reported autoencoder losses
  int metric_sample = 0;      // >0: approximate metrics over a meaning sample
  bool keep_final_language = false;

  int effective_hidden() const { return hidden > 0 ? hidden : n; }
  int effective_auto_size() const {
    return auto_mode == AutoMode::shared
               ? bottleneck
               : (auto_size > 0 ? auto_size : bottleneck);
  }
  double effective_eta() const {
    if (eta > 0.0) return eta;
    return model == ModelKind::ailm ? 5.0 : 1.0;
  }
  double effective_loss_divisor() const {
    return loss_divisor > 0.0 ? loss_divisor : static_cast<double>(r > 0 ? r : 1);
  }
  int effective_threads() const;
};

// Throws ConfigError with a keyed message on any invalid combination.
void validate(const ExperimentConfig& cfg);

struct GenerationRecord {
  int replicate = 0;
  int generation = 0;
  double x_raw = 0, c_raw = 0, s_raw = 0;
  double x = 0, c = 0, s = 0;  // bias-corrected, clamped at 0
  std::vector<double> dec_epoch_loss, enc_epoch_loss, auto_epoch_loss;
  double ms = 0;  // wall-clock duration of the generation
};

struct ReplicateResult {
  int replicate = 0;
  std::vector<GenerationRecord> records;
  std::optional<int> egood_generation;
  std::string error;  // nonempty if the replicate aborted
  LanguageTable final_language;  // only with ExperimentConfig::keep_final_language
};

struct ExperimentResult {
  ExperimentConfig config;
  BaselineEstimate baseline;
  std::vector<ReplicateResult> replicates;
  // all records, sorted by (replicate, generation)
  std::vector<GenerationRecord> records() const;
};

// One full tutor-pupil chain. The optional initial tutor language replaces
// the naive generation-0 tutor (used by threshold tests).
ReplicateResult run_replicate(const ExperimentConfig& cfg, int replicate,
                              const BaselineEstimate& baseline,
                              bool stop_at_egood = false,
                              int max_generations = -1,
                              const LanguageTable* initial_tutor = nullptr);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct UntilResult {
  std::vector<int> generations;  // capped replicates report the cap
  std::vector<bool> capped;
  BaselineEstimate baseline;
  double mean_generations() const;
  int capped_count() const;
};

// Generations until all three corrected metrics first exceed lambda.
UntilResult run_until_egood(const ExperimentConfig& cfg,
                            const LanguageTable* initial_tutor = nullptr);

struct SweepPoint {
  int n = 0;
  int bottleneck = 0;
  double mean_generations = 0;
  int capped_replicates = 0;
};

struct SweepBest {
  int n = 0;
  int best_bottleneck = 0;
  double mean_at_best = 0;
  double mean_at_neighbors = 0;  // average of best-1 and best+1
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<SweepBest> best;
  double slope = 0, intercept = 0;
  std::vector<std::string> warnings;
};

// Threshold runs over every (n, bottleneck) pair; per n the best bottleneck
// minimizes the mean generations-to-threshold, then the best values are fit
// against n by ordinary least squares. A-ILM independent sweeps size the auto
// set at three times the bottleneck.
SweepResult sweep_bottleneck(const std::vector<int>& ns,
                             const std::function<std::vector<int>(int)>& grid,
                             const ExperimentConfig& base);

void linear_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                double& slope, double& intercept);

}  // namespace ilm
