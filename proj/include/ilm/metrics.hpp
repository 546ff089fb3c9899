#pragma once
// Exact expressivity, compositionality and stability over materialized
// languages, plus the naive-agent baseline used for bias correction.

#include "ilm/agents.hpp"
#include "ilm/lang.hpp"

#include <functional>

namespace ilm {

enum class ModelKind { oilm, ailm, oneway };

const char* to_string(ModelKind kind);

// Fraction of the signal space covered by the encoder's range.
double expressivity(const LanguageTable& lang);

// 1 - mean over words of the best fact-to-word conditional entropy, with
// unselected words penalized at 1. Conditioning event is m_i = 1; all exact
// argmin ties are kept when collecting the per-fact optima.
double compositionality(const LanguageTable& lang);

// Fraction of meanings with m == decode(encode(m)); encode from one agent's
// table, decode from the other agent.
double stability(const LanguageTable& encoder_lang,
                 const std::function<uint32_t(uint32_t)>& decode_signal);
double stability(const LanguageTable& encoder_lang, const Mlp& decoder);

// One-way agents have no decoder; generational agreement is the fraction of
// meanings both tables map to the same signal.
double table_agreement(const LanguageTable& a, const LanguageTable& b);

// (y - y0) / (1 - y0), clamped below at zero for reporting.
double bias_correct(double y, double y0);

struct BaselineEstimate {
  ModelKind kind = ModelKind::ailm;
  int n = 0, hidden = 0;
  double x0 = 0, c0 = 0, s0 = 0;
  int agents_used = 0, pairs_used = 0;
};

// x0 and c0 are means over `agents` freshly initialized agents (O-ILM agents
// obverted from their untrained decoders); s0 is the mean over the agents/2
// disjoint pairs they form. Deterministic in the seed.
BaselineEstimate estimate_baseline(ModelKind kind, int n, int hidden,
                                   uint64_t seed, int agents = 40,
                                   bool force_large_obversion = false,
                                   int threads = 1);

}  // namespace ilm
