#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ilm/csv.hpp"
#include "ilm/engine.hpp"

#include <unordered_set>

using namespace ilm;

namespace {

ExperimentConfig small_ailm() {
  ExperimentConfig cfg;
  cfg.model = ModelKind::ailm;
  cfg.n = 5;
  cfg.bottleneck = 12;
  cfg.generations = 6;
  cfg.replicates = 4;
  cfg.seed = 321;
  return cfg;
}

LanguageTable identity_table(int n) {
  return materialize_language([](const BitVector& m) { return m; }, n);
}

}  // namespace

TEST_CASE("derive_seed is deterministic and collision-free across replicates") {
  CHECK(derive_seed(1, 2, "init") == derive_seed(1, 2, "init"));
  CHECK(derive_seed(1, 2, "init") != derive_seed(1, 2, "shuffle"));
  CHECK(derive_seed(1, 2, "init") != derive_seed(2, 2, "init"));
  std::unordered_set<uint64_t> seen;
  seen.reserve(1 << 20);
  for (uint64_t rep = 0; rep < 1000000; ++rep)
    seen.insert(derive_seed(7, rep, "bottleneck"));
  CHECK(seen.size() == 1000000);
}

TEST_CASE("validate rejects the documented misconfigurations") {
  ExperimentConfig cfg = small_ailm();
  SUBCASE("oilm above the obversion cap") {
    cfg.model = ModelKind::oilm;
    cfg.n = 16;
    cfg.bottleneck = 10;
    CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("2^32"), ConfigError);
    cfg.force_obversion = true;
    CHECK_NOTHROW(validate(cfg));
  }
  SUBCASE("shared auto set must match the bottleneck") {
    cfg.auto_size = cfg.bottleneck + 1;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SUBCASE("bottleneck larger than the space") {
    cfg.bottleneck = 33;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SUBCASE("directions other than m2m are ailm-only") {
    cfg.model = ModelKind::oneway;
    cfg.auto_direction = AutoDirection::s2s;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
}

TEST_CASE("a single replicate run equals run_replicate") {
  ExperimentConfig cfg = small_ailm();
  cfg.replicates = 1;
  const ExperimentResult full = run_experiment(cfg);
  const ReplicateResult alone = run_replicate(cfg, 0, full.baseline);
  REQUIRE(full.replicates.size() == 1);
  REQUIRE(alone.records.size() == full.replicates[0].records.size());
  for (size_t k = 0; k < alone.records.size(); ++k) {
    CHECK(alone.records[k].x == full.replicates[0].records[k].x);
    CHECK(alone.records[k].s_raw == full.replicates[0].records[k].s_raw);
  }
}

TEST_CASE("output bytes do not depend on the worker count") {
  ExperimentConfig cfg = small_ailm();
  cfg.threads = 1;
  const ExperimentResult serial = run_experiment(cfg);
  cfg.threads = 4;
  const ExperimentResult parallel = run_experiment(cfg);
  const double divisor = cfg.effective_loss_divisor();
  CHECK(records_to_csv(serial.records(), divisor, false) ==
        records_to_csv(parallel.records(), divisor, false));
  CHECK(losses_to_csv(serial.records(), divisor) ==
        losses_to_csv(parallel.records(), divisor));
}

TEST_CASE("every agent kind runs end to end and logs its own losses") {
  ExperimentConfig cfg = small_ailm();
  cfg.replicates = 2;
  cfg.generations = 3;
  SUBCASE("oilm") {
    cfg.model = ModelKind::oilm;
    const auto records = run_experiment(cfg).records();
    REQUIRE(!records.empty());
    for (const auto& rec : records) {
      CHECK(!rec.dec_epoch_loss.empty());
      CHECK(rec.enc_epoch_loss.empty());
      CHECK(rec.auto_epoch_loss.empty());
    }
  }
  SUBCASE("ailm") {
    const auto records = run_experiment(cfg).records();
    for (const auto& rec : records) {
      CHECK(rec.dec_epoch_loss.size() == static_cast<size_t>(cfg.epochs));
      CHECK(rec.enc_epoch_loss.size() == static_cast<size_t>(cfg.epochs));
      CHECK(rec.auto_epoch_loss.size() == static_cast<size_t>(cfg.epochs));
    }
  }
  SUBCASE("oneway") {
    cfg.model = ModelKind::oneway;
    const auto records = run_experiment(cfg).records();
    for (const auto& rec : records) {
      CHECK(rec.dec_epoch_loss.empty());
      CHECK(!rec.enc_epoch_loss.empty());
      CHECK(rec.auto_epoch_loss.empty());
    }
  }
}

TEST_CASE("metrics stay in range and corrected values are clamped") {
  const auto records = run_experiment(small_ailm()).records();
  for (const auto& rec : records) {
    for (double v : {rec.x_raw, rec.c_raw, rec.s_raw}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    for (double v : {rec.x, rec.c, rec.s}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("an injected e-good tutor meets the threshold immediately") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::ailm;
  cfg.n = 6;
  cfg.bottleneck = 40;
  cfg.replicates = 6;
  cfg.generation_cap = 30;
  cfg.seed = 777;
  const LanguageTable tutor = identity_table(6);
  const UntilResult result = run_until_egood(cfg, &tutor);
  for (size_t i = 0; i < result.generations.size(); ++i) {
    CHECK(!result.capped[i]);
    CHECK(result.generations[i] <= 2);
  }
}

TEST_CASE("the one-way model always hits the generation cap") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::oneway;
  cfg.n = 8;
  cfg.bottleneck = 50;
  cfg.replicates = 5;
  cfg.generation_cap = 40;
  cfg.seed = 31;
  const UntilResult result = run_until_egood(cfg);
  CHECK(result.capped_count() == 5);
}

TEST_CASE("ailm at a workable bottleneck converges in finite generations") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::ailm;
  cfg.n = 8;
  cfg.bottleneck = 75;
  cfg.replicates = 25;
  cfg.generation_cap = 100;
  cfg.seed = 91;
  const UntilResult result = run_until_egood(cfg);
  CHECK(result.capped_count() == 0);
  CHECK(result.mean_generations() < 50.0);
}

TEST_CASE("r=0 strips the autoencoder and expressivity collapses") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::ailm;
  cfg.n = 8;
  cfg.bottleneck = 75;
  cfg.r = 0;
  cfg.generations = 40;
  cfg.replicates = 8;
  cfg.seed = 47;
  const auto records = run_experiment(cfg).records();
  double x_final = 0.0;
  int count = 0;
  for (const auto& rec : records)
    if (rec.generation == cfg.generations) {
      x_final += rec.x;
      ++count;
    }
  REQUIRE(count == cfg.replicates);
  CHECK(x_final / count < 0.5);
}

TEST_CASE("signal-to-signal-only autoencoding fails to evolve expressivity") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::ailm;
  cfg.n = 8;
  cfg.bottleneck = 75;
  cfg.auto_direction = AutoDirection::s2s;
  cfg.generations = 40;
  cfg.replicates = 8;
  cfg.seed = 48;
  const auto records = run_experiment(cfg).records();
  double x_final = 0.0;
  int count = 0;
  for (const auto& rec : records)
    if (rec.generation == cfg.generations) {
      x_final += rec.x;
      ++count;
    }
  REQUIRE(count == cfg.replicates);
  CHECK(x_final / count < 0.5);
}

TEST_CASE("running both chains reaches the threshold faster than m2m") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::ailm;
  cfg.n = 8;
  cfg.bottleneck = 75;
  cfg.replicates = 25;
  cfg.generation_cap = 120;
  cfg.seed = 52;
  const UntilResult m2m = run_until_egood(cfg);
  cfg.auto_direction = AutoDirection::both;
  const UntilResult both = run_until_egood(cfg);
  CHECK(both.mean_generations() < m2m.mean_generations());
}

TEST_CASE("an agent trained on an e-good tutor round-trips its own language") {
  // identity tutor stands in for a converged compositional language
  const LanguageTable tutor = identity_table(8);
  Rng init(derive_seed(88, 0, "init"));
  Rng shuffle(derive_seed(88, 0, "shuffle"));
  Rng auto_rng(derive_seed(88, 0, "auto"));
  Rng sample(derive_seed(88, 0, "bottleneck"));
  AilmAgent pupil = make_ailm(8, 8, init);
  const BottleneckSet set = make_bottleneck(tutor, 75, sample);
  AutoSet autoset;
  for (const MeaningSignal& p : set.pairs) autoset.meanings.push_back(p.meaning);
  ailm_train(pupil, set, autoset, 20, {5.0, Loss::cross_entropy, 20}, shuffle,
             auto_rng);
  const LanguageTable own = ailm_language(pupil);
  CHECK(stability(own, pupil.decoder) >= 0.95);
}

TEST_CASE("sampled metrics stay close to exact ones on converged languages") {
  ExperimentConfig cfg = small_ailm();
  cfg.metric_sample = 24;  // of 32 meanings
  const auto sampled = run_experiment(cfg).records();
  cfg.metric_sample = 0;
  const auto exact = run_experiment(cfg).records();
  REQUIRE(sampled.size() == exact.size());
  for (size_t k = 0; k < sampled.size(); ++k) {
    CHECK(sampled[k].x_raw >= 0.0);
    CHECK(sampled[k].x_raw <= 1.0);
  }
}

TEST_CASE("linear_fit recovers an exact line") {
  std::vector<double> xs, ys;
  for (int n = 4; n <= 12; ++n) {
    xs.push_back(n);
    ys.push_back(10.5 * n - 11.6);
  }
  double slope = 0, intercept = 0;
  linear_fit(xs, ys, slope, intercept);
  CHECK(slope == doctest::Approx(10.5).epsilon(1e-12));
  CHECK(intercept == doctest::Approx(-11.6).epsilon(1e-9));
}

TEST_CASE("sweep reports per-point means, bests and a fit") {
  // tiny sweep at n=4..5 with loose caps keeps this fast
  ExperimentConfig base;
  base.model = ModelKind::ailm;
  base.auto_mode = AutoMode::independent;
  base.replicates = 6;
  base.generation_cap = 60;
  base.seed = 14;
  const SweepResult result = sweep_bottleneck(
      {4, 5}, [](int n) { return std::vector<int>{8, 12, 16}; }, base);
  CHECK(result.points.size() == 6);
  CHECK(result.best.size() == 2);
  for (const SweepBest& b : result.best) CHECK(b.mean_at_best > 0.0);
}
