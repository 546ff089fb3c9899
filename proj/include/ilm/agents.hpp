#pragma once
// The three agent kinds and their full training protocols: O-ILM (decoder
// network plus obverted encoder table), A-ILM (encoder + decoder coupled
// through the autoencoder chain) and the one-way encoder-only agent.

#include "ilm/lang.hpp"
#include "ilm/mlp.hpp"
#include "ilm/rng.hpp"

#include <optional>

namespace ilm {

struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

// Obversion tabulates 2^(2n) pair probabilities; refuse above this without an
// explicit override.
inline constexpr int kObversionCap = 13;

struct MeaningSignal {
  uint32_t meaning = 0;
  uint32_t signal = 0;
  bool operator==(const MeaningSignal&) const = default;
};

struct BottleneckSet {
  int n = 0;
  std::vector<MeaningSignal> pairs;
};

struct AutoSet {
  std::vector<uint32_t> meanings;
};

enum class AutoDirection { m2m, s2s, both };

// Per-epoch training-set losses, evaluated at the start of each epoch before
// that epoch's updates (so the epoch-1 entry is the naive-network loss).
// dec/enc entries are per-pair means; auto entries carry the per-iteration
// scale, r times the per-meaning chain loss (divide by r to compare with the
// supervised losses). Step counters cover the whole training run.
struct TrainLog {
  std::vector<double> dec_loss, enc_loss, auto_loss;
  long dec_steps = 0, enc_steps = 0, auto_steps = 0;
};

struct OilmAgent {
  Mlp decoder;  // signal -> meaning probabilities
  std::optional<LanguageTable> encoder_table;
};

struct AilmAgent {
  Mlp encoder;  // meaning -> signal probabilities
  Mlp decoder;  // signal -> meaning probabilities
};

struct OnewayAgent {
  Mlp encoder;
};

OilmAgent make_oilm(int n, int hidden, Rng& rng);
AilmAgent make_ailm(int n, int hidden, Rng& rng);
OnewayAgent make_oneway(int n, int hidden, Rng& rng);

// e(m) = argmax_s P_ms with P_ms the probability the decoder assigns to
// meaning m given signal s; the lowest signal index wins exact ties.
LanguageTable obvert(const Mlp& decoder, bool force_large = false);

// 20-epoch (cfg.epochs) per-pair SGD on the decoder with signal->meaning
// examples, freshly shuffled each epoch, followed by obversion.
void oilm_train(OilmAgent& pupil, const BottleneckSet& bottleneck,
                const TrainConfig& cfg, Rng& shuffle_rng,
                TrainLog* log = nullptr, bool force_large_obversion = false);

// Per epoch: two independently shuffled copies of the bottleneck; for each of
// |B| iterations one decoder step (copy 1), one encoder step (copy 2), then r
// autoencoder steps on meanings drawn uniformly with replacement from the
// auto set. tutor_language is required for the s2s/both directions, where the
// unsupervised inputs are the tutor's encodings of the drawn meanings.
void ailm_train(AilmAgent& pupil, const BottleneckSet& bottleneck,
                const AutoSet& autoset, int r, const TrainConfig& cfg,
                Rng& shuffle_rng, Rng& auto_rng,
                AutoDirection direction = AutoDirection::m2m,
                const LanguageTable* tutor_language = nullptr,
                TrainLog* log = nullptr);

// Per-pair meaning->signal SGD, shuffled each epoch; no decoder, no obversion.
void oneway_train(OnewayAgent& pupil, const BottleneckSet& bottleneck,
                  const TrainConfig& cfg, Rng& shuffle_rng,
                  TrainLog* log = nullptr);

// size distinct meanings sampled uniformly without replacement, each paired
// with the tutor's encoding.
BottleneckSet make_bottleneck(const LanguageTable& tutor_language, int size,
                              Rng& rng);

BitVector oilm_encode(const OilmAgent& agent, const BitVector& meaning);
BitVector oilm_decode(const OilmAgent& agent, const BitVector& signal);
BitVector ailm_encode(const AilmAgent& agent, const BitVector& meaning);
BitVector ailm_decode(const AilmAgent& agent, const BitVector& signal);
BitVector oneway_encode(const OnewayAgent& agent, const BitVector& meaning);

// Materialized encoder views used by the metrics.
LanguageTable oilm_language(const OilmAgent& agent);
LanguageTable ailm_language(const AilmAgent& agent);
LanguageTable oneway_language(const OnewayAgent& agent);

}  // namespace ilm
