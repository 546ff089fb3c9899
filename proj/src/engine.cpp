#include "ilm/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace ilm {

const char* to_string(AutoMode mode) {
  return mode == AutoMode::shared ? "shared" : "independent";
}

const char* to_string(AutoDirection direction) {
  switch (direction) {
    case AutoDirection::m2m: return "m2m";
    case AutoDirection::s2s: return "s2s";
    case AutoDirection::both: return "both";
  }
  return "?";
}

const char* to_string(Loss loss) {
  return loss == Loss::cross_entropy ? "cross_entropy" : "squared_error";
}

int ExperimentConfig::effective_threads() const {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.n > kMaxSpaceBits)
    throw ConfigError("n: must be in [1, " + std::to_string(kMaxSpaceBits) +
                      "], got " + std::to_string(cfg.n));
  const uint64_t space = uint64_t{1} << cfg.n;
  if (cfg.bottleneck < 1 || static_cast<uint64_t>(cfg.bottleneck) > space)
    throw ConfigError("bottleneck: must be in [1, 2^" + std::to_string(cfg.n) +
                      " = " + std::to_string(space) + "], got " +
                      std::to_string(cfg.bottleneck));
  if (cfg.model == ModelKind::oilm && cfg.n > kObversionCap &&
      !cfg.force_obversion)
    throw ConfigError(
        "model: oilm at n=" + std::to_string(cfg.n) +
        " requires a 2^(2n) = 2^" + std::to_string(2 * cfg.n) +
        "-entry obversion table; set force_obversion=true to allow it");
  if (cfg.auto_mode == AutoMode::shared && cfg.auto_size > 0 &&
      cfg.auto_size != cfg.bottleneck)
    throw ConfigError("auto_size: shared mode requires auto_size == bottleneck (" +
                      std::to_string(cfg.auto_size) + " != " +
                      std::to_string(cfg.bottleneck) + ")");
  if (cfg.auto_mode == AutoMode::independent &&
      (cfg.effective_auto_size() < 1 ||
       static_cast<uint64_t>(cfg.effective_auto_size()) > space))
    throw ConfigError("auto_size: must be in [1, 2^" + std::to_string(cfg.n) +
                      "], got " + std::to_string(cfg.effective_auto_size()));
  if (cfg.auto_direction != AutoDirection::m2m && cfg.model != ModelKind::ailm)
    throw ConfigError("auto_direction: s2s/both apply to the ailm model only");
  if (cfg.effective_eta() <= 0.0) throw ConfigError("eta: must be positive");
  if (cfg.epochs < 1) throw ConfigError("epochs: must be >= 1");
  if (cfg.r < 0) throw ConfigError("r: must be >= 0");
  if (cfg.generations < 1) throw ConfigError("generations: must be >= 1");
  if (cfg.replicates < 1) throw ConfigError("replicates: must be >= 1");
  if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0))
    throw ConfigError("lambda: must lie in (0, 1)");
  if (cfg.generation_cap < 1) throw ConfigError("generation_cap: must be >= 1");
  if (cfg.effective_hidden() < 1) throw ConfigError("hidden: must be >= 1");
  if (cfg.metric_sample < 0) throw ConfigError("metric_sample: must be >= 0");
  if (cfg.metric_sample > 0 &&
      static_cast<uint64_t>(cfg.metric_sample) > space)
    throw ConfigError("metric_sample: exceeds the meaning space");
}

namespace {

// Engine-internal agent wrapper: only the materialized language leaves a
// generation, plus the decoder needed for the stability measurement.
struct PupilOutcome {
  LanguageTable lang;
  TrainLog log;
};

struct SampledMetrics {
  double x = 0, c = 0, s = 0;
};

// Approximate metrics over a random meaning sample; off for all paper-scale
// runs, kept behind ExperimentConfig::metric_sample.
SampledMetrics sampled_metrics(const ExperimentConfig& cfg,
                               const LanguageTable& pupil_lang,
                               const LanguageTable& tutor_lang,
                               const Mlp* pupil_decoder, Rng& rng) {
  SampledMetrics out;
  const int n = cfg.n;
  const uint64_t space = uint64_t{1} << n;
  const auto sample =
      rng.sample_distinct(static_cast<uint32_t>(cfg.metric_sample), space);
  std::vector<bool> seen(space, false);
  size_t distinct = 0;
  for (uint32_t m : sample)
    if (!seen[pupil_lang[m]]) {
      seen[pupil_lang[m]] = true;
      ++distinct;
    }
  out.x = static_cast<double>(distinct) / sample.size();

  std::vector<long> ones(n, 0);
  std::vector<long> counts(static_cast<size_t>(n) * n, 0);
  for (uint32_t m : sample) {
    const uint32_t s = pupil_lang[m];
    for (int i = 0; i < n; ++i) {
      if (!((m >> (n - 1 - i)) & 1u)) continue;
      ++ones[i];
      for (int j = 0; j < n; ++j)
        counts[static_cast<size_t>(i) * n + j] += (s >> (n - 1 - j)) & 1u;
    }
  }
  auto entropy2 = [](double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
  };
  std::vector<double> word_best(n, 2.0);
  std::vector<bool> word_selected(n, false);
  for (int i = 0; i < n; ++i) {
    double hmin = 2.0;
    std::vector<double> row(n, 1.0);
    for (int j = 0; j < n; ++j) {
      row[j] = ones[i] > 0 ? entropy2(static_cast<double>(counts[i * n + j]) /
                                      static_cast<double>(ones[i]))
                           : 1.0;
      hmin = std::min(hmin, row[j]);
    }
    for (int j = 0; j < n; ++j)
      if (row[j] == hmin) {
        word_selected[j] = true;
        word_best[j] = std::min(word_best[j], row[j]);
      }
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += word_selected[j] ? word_best[j] : 1.0;
  out.c = 1.0 - total / n;

  size_t recovered = 0;
  for (uint32_t m : sample) {
    const uint32_t s = tutor_lang[m];
    if (pupil_decoder) {
      if (bits_to_index(decide(forward(*pupil_decoder, index_to_bits(s, n)))) ==
          m)
        ++recovered;
    } else if (pupil_lang[m] == s) {
      ++recovered;
    }
  }
  out.s = static_cast<double>(recovered) / sample.size();
  return out;
}

LanguageTable naive_tutor_language(const ExperimentConfig& cfg, Rng& init_rng) {
  switch (cfg.model) {
    case ModelKind::oilm: {
      OilmAgent tutor = make_oilm(cfg.n, cfg.effective_hidden(), init_rng);
      return obvert(tutor.decoder, cfg.force_obversion);
    }
    case ModelKind::ailm: {
      AilmAgent tutor = make_ailm(cfg.n, cfg.effective_hidden(), init_rng);
      return ailm_language(tutor);
    }
    case ModelKind::oneway: {
      OnewayAgent tutor = make_oneway(cfg.n, cfg.effective_hidden(), init_rng);
      return oneway_language(tutor);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<GenerationRecord> ExperimentResult::records() const {
  std::vector<GenerationRecord> all;
  for (const ReplicateResult& r : replicates)
    all.insert(all.end(), r.records.begin(), r.records.end());
  std::sort(all.begin(), all.end(),
            [](const GenerationRecord& a, const GenerationRecord& b) {
              return std::tie(a.replicate, a.generation) <
                     std::tie(b.replicate, b.generation);
            });
  return all;
}

ReplicateResult run_replicate(const ExperimentConfig& cfg, int replicate,
                              const BaselineEstimate& baseline,
                              bool stop_at_egood, int max_generations,
                              const LanguageTable* initial_tutor) {
  ReplicateResult result;
  result.replicate = replicate;
  const uint64_t rep = static_cast<uint64_t>(replicate);
  Rng init_rng(derive_seed(cfg.seed, rep, "init"));
  Rng bottle_rng(derive_seed(cfg.seed, rep, "bottleneck"));
  Rng autoset_rng(derive_seed(cfg.seed, rep, "autoset"));
  Rng shuffle_rng(derive_seed(cfg.seed, rep, "shuffle"));
  Rng auto_rng(derive_seed(cfg.seed, rep, "auto"));
  Rng metric_rng(derive_seed(cfg.seed, rep, "metric-sample"));

  const int generations =
      max_generations > 0 ? max_generations : cfg.generations;
  const TrainConfig train{cfg.effective_eta(), cfg.loss, cfg.epochs};
  const uint64_t space = uint64_t{1} << cfg.n;

  try {
    LanguageTable tutor_lang =
        initial_tutor ? *initial_tutor : naive_tutor_language(cfg, init_rng);
    for (int g = 1; g <= generations; ++g) {
      const auto started = std::chrono::steady_clock::now();
      BottleneckSet bottleneck =
          make_bottleneck(tutor_lang, cfg.bottleneck, bottle_rng);

      GenerationRecord rec;
      rec.replicate = replicate;
      rec.generation = g;

      LanguageTable pupil_lang;
      const Mlp* stability_decoder = nullptr;
      Mlp pupil_decoder;
      switch (cfg.model) {
        case ModelKind::oilm: {
          OilmAgent pupil = make_oilm(cfg.n, cfg.effective_hidden(), init_rng);
          TrainLog log;
          oilm_train(pupil, bottleneck, train, shuffle_rng, &log,
                     cfg.force_obversion);
          pupil_lang = std::move(*pupil.encoder_table);
          pupil_decoder = std::move(pupil.decoder);
          stability_decoder = &pupil_decoder;
          rec.dec_epoch_loss = std::move(log.dec_loss);
          break;
        }
        case ModelKind::ailm: {
          AilmAgent pupil = make_ailm(cfg.n, cfg.effective_hidden(), init_rng);
          AutoSet autoset;
          if (cfg.auto_mode == AutoMode::shared) {
            autoset.meanings.reserve(bottleneck.pairs.size());
            for (const MeaningSignal& p : bottleneck.pairs)
              autoset.meanings.push_back(p.meaning);
          } else {
            autoset.meanings = autoset_rng.sample_distinct(
                static_cast<uint32_t>(cfg.effective_auto_size()), space);
          }
          TrainLog log;
          ailm_train(pupil, bottleneck, autoset, cfg.r, train, shuffle_rng,
                     auto_rng, cfg.auto_direction, &tutor_lang, &log);
          pupil_lang = ailm_language(pupil);
          pupil_decoder = std::move(pupil.decoder);
          stability_decoder = &pupil_decoder;
          rec.dec_epoch_loss = std::move(log.dec_loss);
          rec.enc_epoch_loss = std::move(log.enc_loss);
          rec.auto_epoch_loss = std::move(log.auto_loss);
          break;
        }
        case ModelKind::oneway: {
          OnewayAgent pupil =
              make_oneway(cfg.n, cfg.effective_hidden(), init_rng);
          TrainLog log;
          oneway_train(pupil, bottleneck, train, shuffle_rng, &log);
          pupil_lang = oneway_language(pupil);
          rec.enc_epoch_loss = std::move(log.enc_loss);
          break;
        }
      }

      if (cfg.metric_sample > 0) {
        const SampledMetrics m = sampled_metrics(
            cfg, pupil_lang, tutor_lang, stability_decoder, metric_rng);
        rec.x_raw = m.x;
        rec.c_raw = m.c;
        rec.s_raw = m.s;
      } else {
        rec.x_raw = expressivity(pupil_lang);
        rec.c_raw = compositionality(pupil_lang);
        rec.s_raw = stability_decoder
                        ? stability(tutor_lang, *stability_decoder)
                        : table_agreement(tutor_lang, pupil_lang);
      }
      rec.x = bias_correct(rec.x_raw, baseline.x0);
      rec.c = bias_correct(rec.c_raw, baseline.c0);
      rec.s = bias_correct(rec.s_raw, baseline.s0);
      rec.ms = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - started)
                   .count();

      const bool egood =
          rec.x > cfg.lambda && rec.c > cfg.lambda && rec.s > cfg.lambda;
      result.records.push_back(std::move(rec));
      if (egood && !result.egood_generation) result.egood_generation = g;
      if (egood && stop_at_egood) {
        if (cfg.keep_final_language) result.final_language = std::move(pupil_lang);
        break;
      }
      tutor_lang = std::move(pupil_lang);
      if (g == generations && cfg.keep_final_language)
        result.final_language = tutor_lang;
    }
  } catch (const NumericError& e) {
    result.error = e.what();
  }
  return result;
}

namespace {

template <class Work>
void parallel_replicates(int replicates, int threads, Work&& work) {
  const int workers = std::max(1, std::min(threads, replicates));
  if (workers == 1) {
    for (int i = 0; i < replicates; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < replicates; i = next.fetch_add(1))
        work(i);
    });
  for (auto& th : pool) th.join();
}

BaselineEstimate experiment_baseline(const ExperimentConfig& cfg) {
  return estimate_baseline(cfg.model, cfg.n, cfg.effective_hidden(),
                           derive_seed(cfg.seed, 0, "baseline"), 40,
                           cfg.force_obversion, cfg.effective_threads());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result;
  result.config = cfg;
  result.baseline = experiment_baseline(cfg);
  result.replicates.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, cfg.effective_threads(), [&](int i) {
    result.replicates[i] = run_replicate(cfg, i, result.baseline);
  });
  return result;
}

double UntilResult::mean_generations() const {
  double total = 0.0;
  for (int g : generations) total += g;
  return generations.empty() ? 0.0 : total / generations.size();
}

int UntilResult::capped_count() const {
  int count = 0;
  for (bool c : capped)
    if (c) ++count;
  return count;
}

UntilResult run_until_egood(const ExperimentConfig& cfg,
                            const LanguageTable* initial_tutor) {
  validate(cfg);
  UntilResult result;
  result.baseline = experiment_baseline(cfg);
  result.generations.resize(cfg.replicates);
  result.capped.resize(cfg.replicates);
  parallel_replicates(cfg.replicates, cfg.effective_threads(), [&](int i) {
    ReplicateResult rep =
        run_replicate(cfg, i, result.baseline, /*stop_at_egood=*/true,
                      cfg.generation_cap, initial_tutor);
    if (rep.egood_generation) {
      result.generations[i] = *rep.egood_generation;
      result.capped[i] = false;
    } else {
      result.generations[i] = cfg.generation_cap;
      result.capped[i] = true;
    }
  });
  return result;
}

void linear_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                double& slope, double& intercept) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit: need at least two points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x values");
  slope = sxy / sxx;
  intercept = my - slope * mx;
}

SweepResult sweep_bottleneck(const std::vector<int>& ns,
                             const std::function<std::vector<int>(int)>& grid,
                             const ExperimentConfig& base) {
  if (ns.empty()) throw ConfigError("sweep: empty n range");
  SweepResult result;

  auto point_config = [&](int n, int bottleneck) {
    ExperimentConfig cfg = base;
    cfg.n = n;
    cfg.bottleneck = bottleneck;
    if (cfg.model == ModelKind::ailm && cfg.auto_mode == AutoMode::independent)
      cfg.auto_size = std::min<int>(3 * bottleneck,
                                    static_cast<int>(uint64_t{1} << n));
    cfg.seed = derive_seed(base.seed,
                           (static_cast<uint64_t>(n) << 32) |
                               static_cast<uint64_t>(bottleneck),
                           "sweep-point");
    validate(cfg);
    return cfg;
  };
  auto run_point = [&](int n, int bottleneck) {
    const UntilResult until = run_until_egood(point_config(n, bottleneck));
    return SweepPoint{n, bottleneck, until.mean_generations(),
                      until.capped_count()};
  };

  std::vector<double> fit_n, fit_best;
  for (int n : ns) {
    const uint64_t space = uint64_t{1} << n;
    std::vector<int> bottlenecks = grid(n);
    std::erase_if(bottlenecks, [&](int b) {
      return b < 1 || static_cast<uint64_t>(b) > space;
    });
    if (bottlenecks.empty()) {
      result.warnings.push_back("n=" + std::to_string(n) +
                                ": empty bottleneck grid, skipped");
      continue;
    }
    std::optional<SweepPoint> best;
    for (int b : bottlenecks) {
      SweepPoint point = run_point(n, b);
      if (point.capped_replicates < base.replicates &&
          (!best || point.mean_generations < best->mean_generations))
        best = point;
      result.points.push_back(point);
    }
    if (!best) {
      result.warnings.push_back("n=" + std::to_string(n) +
                                ": every bottleneck hit the generation cap; "
                                "excluded from the fit");
      continue;
    }
    SweepBest entry;
    entry.n = n;
    entry.best_bottleneck = best->bottleneck;
    entry.mean_at_best = best->mean_generations;
    double neighbor_total = 0.0;
    int neighbor_count = 0;
    for (int b : {best->bottleneck - 1, best->bottleneck + 1}) {
      if (b < 1 || static_cast<uint64_t>(b) > space) continue;
      neighbor_total += run_point(n, b).mean_generations;
      ++neighbor_count;
    }
    entry.mean_at_neighbors =
        neighbor_count > 0 ? neighbor_total / neighbor_count : 0.0;
    result.best.push_back(entry);
    fit_n.push_back(n);
    fit_best.push_back(entry.best_bottleneck);
  }
  if (fit_n.size() >= 2) {
    linear_fit(fit_n, fit_best, result.slope, result.intercept);
  } else {
    result.warnings.push_back(
        "fewer than two usable n values; no linear fit computed");
  }
  return result;
}

}  // namespace ilm
