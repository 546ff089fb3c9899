#include "ilm/agents.hpp"

#include <string>

namespace ilm {

OilmAgent make_oilm(int n, int hidden, Rng& rng) {
  return OilmAgent{init_glorot(n, hidden, n, rng), std::nullopt};
}

AilmAgent make_ailm(int n, int hidden, Rng& rng) {
  // encoder first, then decoder; order is part of the seeding contract
  Mlp enc = init_glorot(n, hidden, n, rng);
  Mlp dec = init_glorot(n, hidden, n, rng);
  return AilmAgent{std::move(enc), std::move(dec)};
}

OnewayAgent make_oneway(int n, int hidden, Rng& rng) {
  return OnewayAgent{init_glorot(n, hidden, n, rng)};
}

LanguageTable obvert(const Mlp& decoder, bool force_large) {
  if (decoder.n_in != decoder.n_out)
    throw std::invalid_argument("obvert: decoder must map n bits to n bits");
  const int n = decoder.n_in;
  if (n > kObversionCap && !force_large)
    throw ConfigError(
        "obvert: n=" + std::to_string(n) + " needs a 2^(2n) = 2^" +
        std::to_string(2 * n) +
        "-entry probability table; raise force_obversion to allow it");
  const uint32_t count = uint32_t{1} << n;
  std::vector<double> best_p(count, -1.0);
  std::vector<uint32_t> best_s(count, 0);
  std::vector<double> q1(n), q0(n);
  forward_all(decoder, [&](uint32_t s, const ProbVector& p) {
    for (int i = 0; i < n; ++i) {
      q1[i] = p[i];
      q0[i] = 1.0 - p[i];
    }
    for (uint32_t m = 0; m < count; ++m) {
      double prod = 1.0;
      for (int i = 0; i < n; ++i)
        prod *= ((m >> (n - 1 - i)) & 1u) ? q1[i] : q0[i];
      if (prod > best_p[m] || (prod == best_p[m] && s < best_s[m])) {
        best_p[m] = prod;
        best_s[m] = s;
      }
    }
  });
  return LanguageTable{n, std::move(best_s)};
}

namespace {

// mean loss of net over the pairs in their (input, target) orientation
double eval_pairs(const Mlp& net, const std::vector<MeaningSignal>& pairs,
                  int n, bool signal_to_meaning, Loss loss) {
  double total = 0.0;
  for (const MeaningSignal& ex : pairs) {
    const BitVector in =
        index_to_bits(signal_to_meaning ? ex.signal : ex.meaning, n);
    const BitVector out =
        index_to_bits(signal_to_meaning ? ex.meaning : ex.signal, n);
    total += loss_value(forward(net, in), out, loss);
  }
  return pairs.empty() ? 0.0 : total / static_cast<double>(pairs.size());
}

}  // namespace

void oilm_train(OilmAgent& pupil, const BottleneckSet& bottleneck,
                const TrainConfig& cfg, Rng& shuffle_rng, TrainLog* log,
                bool force_large_obversion) {
  std::vector<MeaningSignal> order = bottleneck.pairs;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (log)
      log->dec_loss.push_back(
          eval_pairs(pupil.decoder, bottleneck.pairs, bottleneck.n, true,
                     cfg.loss));
    shuffle_rng.shuffle(order);
    for (const MeaningSignal& ex : order) {
      sgd_step(pupil.decoder, index_to_bits(ex.signal, bottleneck.n),
               index_to_bits(ex.meaning, bottleneck.n), cfg);
      if (log) ++log->dec_steps;
    }
  }
  pupil.encoder_table = obvert(pupil.decoder, force_large_obversion);
}

void ailm_train(AilmAgent& pupil, const BottleneckSet& bottleneck,
                const AutoSet& autoset, int r, const TrainConfig& cfg,
                Rng& shuffle_rng, Rng& auto_rng, AutoDirection direction,
                const LanguageTable* tutor_language, TrainLog* log) {
  if (r > 0 && autoset.meanings.empty())
    throw std::invalid_argument("ailm_train: empty auto set with r > 0");
  if (direction != AutoDirection::m2m && tutor_language == nullptr)
    throw std::invalid_argument(
        "ailm_train: s2s/both directions need the tutor language");
  const int n = bottleneck.n;
  std::vector<MeaningSignal> copy1 = bottleneck.pairs;
  std::vector<MeaningSignal> copy2 = bottleneck.pairs;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (log) {
      log->dec_loss.push_back(
          eval_pairs(pupil.decoder, bottleneck.pairs, n, true, cfg.loss));
      log->enc_loss.push_back(
          eval_pairs(pupil.encoder, bottleneck.pairs, n, false, cfg.loss));
      double auto_total = 0.0;
      for (uint32_t m : autoset.meanings) {
        const BitVector mb = index_to_bits(m, n);
        if (direction == AutoDirection::m2m) {
          auto_total += chain_loss(pupil.encoder, pupil.decoder, mb, cfg.loss);
        } else if (direction == AutoDirection::s2s) {
          auto_total += chain_loss(pupil.decoder, pupil.encoder,
                                   index_to_bits((*tutor_language)[m], n),
                                   cfg.loss);
        } else {
          auto_total +=
              0.5 * (chain_loss(pupil.encoder, pupil.decoder, mb, cfg.loss) +
                     chain_loss(pupil.decoder, pupil.encoder,
                                index_to_bits((*tutor_language)[m], n),
                                cfg.loss));
        }
      }
      // per-iteration scale: r draws per iteration
      log->auto_loss.push_back(
          autoset.meanings.empty()
              ? 0.0
              : r * auto_total / static_cast<double>(autoset.meanings.size()));
    }
    shuffle_rng.shuffle(copy1);
    shuffle_rng.shuffle(copy2);
    for (size_t k = 0; k < copy1.size(); ++k) {
      sgd_step(pupil.decoder, index_to_bits(copy1[k].signal, n),
               index_to_bits(copy1[k].meaning, n), cfg);
      sgd_step(pupil.encoder, index_to_bits(copy2[k].meaning, n),
               index_to_bits(copy2[k].signal, n), cfg);
      if (log) {
        ++log->dec_steps;
        ++log->enc_steps;
      }
      for (int t = 0; t < r; ++t) {
        const uint32_t m = autoset.meanings[auto_rng.below(autoset.meanings.size())];
        const bool meaning_chain =
            direction == AutoDirection::m2m ||
            (direction == AutoDirection::both && t % 2 == 0);
        if (meaning_chain) {
          autoencoder_step(pupil.encoder, pupil.decoder, index_to_bits(m, n),
                           cfg);
        } else {
          const uint32_t s = (*tutor_language)[m];
          autoencoder_step(pupil.decoder, pupil.encoder, index_to_bits(s, n),
                           cfg);
        }
        if (log) ++log->auto_steps;
      }
    }
  }
}

void oneway_train(OnewayAgent& pupil, const BottleneckSet& bottleneck,
                  const TrainConfig& cfg, Rng& shuffle_rng, TrainLog* log) {
  std::vector<MeaningSignal> order = bottleneck.pairs;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (log)
      log->enc_loss.push_back(
          eval_pairs(pupil.encoder, bottleneck.pairs, bottleneck.n, false,
                     cfg.loss));
    shuffle_rng.shuffle(order);
    for (const MeaningSignal& ex : order) {
      sgd_step(pupil.encoder, index_to_bits(ex.meaning, bottleneck.n),
               index_to_bits(ex.signal, bottleneck.n), cfg);
      if (log) ++log->enc_steps;
    }
  }
}

BottleneckSet make_bottleneck(const LanguageTable& tutor_language, int size,
                              Rng& rng) {
  const uint64_t space = uint64_t{1} << tutor_language.n;
  if (size < 1 || static_cast<uint64_t>(size) > space)
    throw ConfigError("make_bottleneck: size " + std::to_string(size) +
                      " outside [1, 2^" + std::to_string(tutor_language.n) +
                      "]");
  BottleneckSet set;
  set.n = tutor_language.n;
  set.pairs.reserve(size);
  for (uint32_t m : rng.sample_distinct(static_cast<uint32_t>(size), space))
    set.pairs.push_back({m, tutor_language[m]});
  return set;
}

BitVector oilm_encode(const OilmAgent& agent, const BitVector& meaning) {
  if (!agent.encoder_table)
    throw StateError("oilm_encode: agent has not been obverted yet");
  return agent.encoder_table->signal_bits(bits_to_index(meaning));
}

BitVector oilm_decode(const OilmAgent& agent, const BitVector& signal) {
  return decide(forward(agent.decoder, signal));
}

BitVector ailm_encode(const AilmAgent& agent, const BitVector& meaning) {
  return decide(forward(agent.encoder, meaning));
}

BitVector ailm_decode(const AilmAgent& agent, const BitVector& signal) {
  return decide(forward(agent.decoder, signal));
}

BitVector oneway_encode(const OnewayAgent& agent, const BitVector& meaning) {
  return decide(forward(agent.encoder, meaning));
}

LanguageTable oilm_language(const OilmAgent& agent) {
  if (!agent.encoder_table)
    throw StateError("oilm_language: agent has not been obverted yet");
  return *agent.encoder_table;
}

LanguageTable ailm_language(const AilmAgent& agent) {
  return materialize_net_table(agent.encoder);
}

LanguageTable oneway_language(const OnewayAgent& agent) {
  return materialize_net_table(agent.encoder);
}

}  // namespace ilm
