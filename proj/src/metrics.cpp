#include "ilm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ilm {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::oilm: return "oilm";
    case ModelKind::ailm: return "ailm";
    case ModelKind::oneway: return "oneway";
  }
  return "?";
}

double expressivity(const LanguageTable& lang) {
  std::vector<bool> seen(lang.size(), false);
  size_t distinct = 0;
  for (uint32_t s : lang.signals)
    if (!seen[s]) {
      seen[s] = true;
      ++distinct;
    }
  return static_cast<double>(distinct) / static_cast<double>(lang.size());
}

namespace {

double entropy2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace

double compositionality(const LanguageTable& lang) {
  const int n = lang.n;
  const uint32_t count = uint32_t{1} << n;
  const double half = static_cast<double>(count / 2);
  // counts[i][j] = #{m : m_i = 1 and s_j = 1}
  std::vector<long> counts(static_cast<size_t>(n) * n, 0);
  std::vector<long> srow(n);
  for (uint32_t m = 0; m < count; ++m) {
    const uint32_t s = lang.signals[m];
    for (int j = 0; j < n; ++j) srow[j] = (s >> (n - 1 - j)) & 1u;
    for (int i = 0; i < n; ++i) {
      if (!((m >> (n - 1 - i)) & 1u)) continue;
      long* row = &counts[static_cast<size_t>(i) * n];
      for (int j = 0; j < n; ++j) row[j] += srow[j];
    }
  }
  std::vector<double> h(static_cast<size_t>(n) * n);
  for (size_t k = 0; k < h.size(); ++k)
    h[k] = entropy2(static_cast<double>(counts[k]) / half);
  // h'_j: the lowest per-fact optimum naming word j, or 1 if no fact selects
  // word j. All exact ties are kept when collecting the optima.
  std::vector<double> word_best(n, 2.0);
  std::vector<bool> word_selected(n, false);
  for (int i = 0; i < n; ++i) {
    const double* row = &h[static_cast<size_t>(i) * n];
    double hmin = row[0];
    for (int j = 1; j < n; ++j) hmin = std::min(hmin, row[j]);
    for (int j = 0; j < n; ++j)
      if (row[j] == hmin) {
        word_selected[j] = true;
        word_best[j] = std::min(word_best[j], row[j]);
      }
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += word_selected[j] ? word_best[j] : 1.0;
  return 1.0 - total / static_cast<double>(n);
}

double stability(const LanguageTable& encoder_lang,
                 const std::function<uint32_t(uint32_t)>& decode_signal) {
  size_t recovered = 0;
  for (uint32_t m = 0; m < encoder_lang.size(); ++m)
    if (decode_signal(encoder_lang[m]) == m) ++recovered;
  return static_cast<double>(recovered) /
         static_cast<double>(encoder_lang.size());
}

double stability(const LanguageTable& encoder_lang, const Mlp& decoder) {
  if (decoder.n_in != encoder_lang.n)
    throw std::invalid_argument("stability: decoder size mismatch");
  const uint32_t count = uint32_t{1} << encoder_lang.n;
  // Count distinct signals first: when most of the signal space is in use it
  // is cheaper to tabulate the whole decoder than to decode one-by-one.
  std::vector<bool> seen(count, false);
  uint32_t distinct = 0;
  for (uint32_t s : encoder_lang.signals)
    if (!seen[s]) {
      seen[s] = true;
      ++distinct;
    }
  size_t recovered = 0;
  if (distinct >= count / 8) {
    const LanguageTable dec_table = materialize_net_table(decoder);
    for (uint32_t m = 0; m < count; ++m)
      if (dec_table[encoder_lang[m]] == m) ++recovered;
  } else {
    std::vector<int64_t> memo(count, -1);
    for (uint32_t m = 0; m < count; ++m) {
      const uint32_t s = encoder_lang[m];
      if (memo[s] < 0)
        memo[s] = bits_to_index(
            decide(forward(decoder, index_to_bits(s, encoder_lang.n))));
      if (memo[s] == m) ++recovered;
    }
  }
  return static_cast<double>(recovered) / static_cast<double>(count);
}

double table_agreement(const LanguageTable& a, const LanguageTable& b) {
  if (a.n != b.n) throw std::invalid_argument("table_agreement: size mismatch");
  size_t same = 0;
  for (uint32_t m = 0; m < a.size(); ++m)
    if (a[m] == b[m]) ++same;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

double bias_correct(double y, double y0) {
  if (y0 >= 1.0)
    throw ConfigError("bias_correct: degenerate baseline y0 >= 1");
  return std::max(0.0, (y - y0) / (1.0 - y0));
}

BaselineEstimate estimate_baseline(ModelKind kind, int n, int hidden,
                                   uint64_t seed, int agents,
                                   bool force_large_obversion, int threads) {
  if (agents < 2 || agents % 2 != 0)
    throw std::invalid_argument("estimate_baseline: agents must be even");
  BaselineEstimate est;
  est.kind = kind;
  est.n = n;
  est.hidden = hidden;
  est.agents_used = agents;
  est.pairs_used = agents / 2;

  struct NaiveAgent {
    LanguageTable lang;
    Mlp decoder;  // unused for oneway
  };
  std::vector<NaiveAgent> pool(agents);
  auto build = [&](int k) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(k), "baseline-agent"));
    switch (kind) {
      case ModelKind::oilm: {
        OilmAgent a = make_oilm(n, hidden, rng);
        a.encoder_table = obvert(a.decoder, force_large_obversion);
        pool[k] = {std::move(*a.encoder_table), std::move(a.decoder)};
        break;
      }
      case ModelKind::ailm: {
        AilmAgent a = make_ailm(n, hidden, rng);
        pool[k] = {ailm_language(a), std::move(a.decoder)};
        break;
      }
      case ModelKind::oneway: {
        OnewayAgent a = make_oneway(n, hidden, rng);
        pool[k] = {oneway_language(a), Mlp{}};
        break;
      }
    }
  };
  if (threads > 1) {
    std::vector<std::thread> workers;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      workers.emplace_back([&] {
        for (int k = next.fetch_add(1); k < agents; k = next.fetch_add(1))
          build(k);
      });
    for (auto& w : workers) w.join();
  } else {
    for (int k = 0; k < agents; ++k) build(k);
  }

  double x_total = 0.0, c_total = 0.0;
  for (const NaiveAgent& a : pool) {
    x_total += expressivity(a.lang);
    c_total += compositionality(a.lang);
  }
  est.x0 = x_total / agents;
  est.c0 = c_total / agents;

  double s_total = 0.0;
  for (int k = 0; k + 1 < agents; k += 2) {
    if (kind == ModelKind::oneway)
      s_total += table_agreement(pool[k].lang, pool[k + 1].lang);
    else
      s_total += stability(pool[k].lang, pool[k + 1].decoder);
  }
  est.s0 = s_total / est.pairs_used;
  return est;
}

}  // namespace ilm
