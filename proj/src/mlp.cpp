#include "ilm/mlp.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace ilm {

namespace {

constexpr double kProbClamp = 1e-12;

void check_dims(const Mlp& net, size_t in_size, const char* what) {
  if (static_cast<int>(in_size) != net.n_in)
    throw std::invalid_argument(std::string(what) + ": input size " +
                                std::to_string(in_size) + " != n_in " +
                                std::to_string(net.n_in));
}

// Forward pass with intermediates kept for backprop.
struct Activations {
  ProbVector hidden;  // sigma(z1)
  ProbVector out;     // sigma(z2)
};

template <class In>
Activations forward_impl(const Mlp& net, const In& x) {
  Activations act;
  act.hidden.resize(net.n_hidden);
  for (int h = 0; h < net.n_hidden; ++h) {
    double z = net.b_h[h];
    const double* row = &net.w_ih[static_cast<size_t>(h) * net.n_in];
    for (int i = 0; i < net.n_in; ++i) z += row[i] * static_cast<double>(x[i]);
    act.hidden[h] = sigmoid(z);
  }
  act.out.resize(net.n_out);
  for (int o = 0; o < net.n_out; ++o) {
    double z = net.b_o[o];
    const double* row = &net.w_ho[static_cast<size_t>(o) * net.n_hidden];
    for (int h = 0; h < net.n_hidden; ++h) z += row[h] * act.hidden[h];
    const double* direct = &net.w_io[static_cast<size_t>(o) * net.n_in];
    for (int i = 0; i < net.n_in; ++i)
      z += direct[i] * static_cast<double>(x[i]);
    act.out[o] = sigmoid(z);
  }
  return act;
}

// d(loss)/d(z2), the output pre-activation gradient.
void output_delta(const ProbVector& p, const BitVector& target, Loss loss,
                  ProbVector& delta) {
  delta.resize(p.size());
  for (size_t k = 0; k < p.size(); ++k) {
    const double t = target[k] ? 1.0 : 0.0;
    if (loss == Loss::cross_entropy) {
      delta[k] = p[k] - t;
    } else {
      delta[k] = 2.0 * (p[k] - t) * p[k] * (1.0 - p[k]);
    }
  }
}

// Backprop through one net given the output delta; accumulates the input
// delta (d loss / d input) if requested, and applies the SGD update. The
// input gradient has two paths: through the hidden layer and through the
// direct shortcut weights.
template <class In>
void backprop_update(Mlp& net, const In& x, const Activations& act,
                     const ProbVector& delta_out, double eta,
                     ProbVector* delta_input) {
  ProbVector delta_h(net.n_hidden, 0.0);
  if (delta_input) {
    delta_input->assign(net.n_in, 0.0);
    for (int o = 0; o < net.n_out; ++o) {
      const double d = delta_out[o];
      const double* direct = &net.w_io[static_cast<size_t>(o) * net.n_in];
      for (int i = 0; i < net.n_in; ++i) (*delta_input)[i] += direct[i] * d;
    }
  }
  for (int o = 0; o < net.n_out; ++o) {
    const double d = delta_out[o];
    double* row = &net.w_ho[static_cast<size_t>(o) * net.n_hidden];
    for (int h = 0; h < net.n_hidden; ++h) {
      delta_h[h] += row[h] * d;
      row[h] -= eta * d * act.hidden[h];
    }
    double* direct = &net.w_io[static_cast<size_t>(o) * net.n_in];
    for (int i = 0; i < net.n_in; ++i)
      direct[i] -= eta * d * static_cast<double>(x[i]);
    net.b_o[o] -= eta * d;
  }
  for (int h = 0; h < net.n_hidden; ++h)
    delta_h[h] *= act.hidden[h] * (1.0 - act.hidden[h]);
  if (delta_input) {
    for (int h = 0; h < net.n_hidden; ++h) {
      const double d = delta_h[h];
      const double* row = &net.w_ih[static_cast<size_t>(h) * net.n_in];
      for (int i = 0; i < net.n_in; ++i) (*delta_input)[i] += row[i] * d;
    }
  }
  for (int h = 0; h < net.n_hidden; ++h) {
    const double d = delta_h[h];
    double* row = &net.w_ih[static_cast<size_t>(h) * net.n_in];
    for (int i = 0; i < net.n_in; ++i)
      row[i] -= eta * d * static_cast<double>(x[i]);
    net.b_h[h] -= eta * d;
  }
}

}  // namespace

bool Mlp::finite() const {
  auto ok = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  return ok(w_ih) && ok(b_h) && ok(w_ho) && ok(w_io) && ok(b_o);
}

Mlp init_glorot(int n_in, int n_hidden, int n_out, Rng& rng) {
  if (n_in < 1 || n_hidden < 1 || n_out < 1)
    throw std::invalid_argument("init_glorot: all layer sizes must be >= 1");
  Mlp net;
  net.n_in = n_in;
  net.n_hidden = n_hidden;
  net.n_out = n_out;
  net.w_ih.resize(static_cast<size_t>(n_hidden) * n_in);
  net.b_h.assign(static_cast<size_t>(n_hidden), 0.0);
  net.w_ho.resize(static_cast<size_t>(n_out) * n_hidden);
  net.w_io.assign(static_cast<size_t>(n_out) * n_in, 0.0);
  net.b_o.assign(static_cast<size_t>(n_out), 0.0);
  const double bound_ih = std::sqrt(6.0 / (n_in + n_hidden));
  for (double& w : net.w_ih) w = bound_ih * (2.0 * rng.next_unit() - 1.0);
  const double bound_ho = std::sqrt(6.0 / (n_hidden + n_out));
  for (double& w : net.w_ho) w = bound_ho * (2.0 * rng.next_unit() - 1.0);
  // the shortcut weights start at zero, like the biases: a naive network
  // behaves exactly like the plain two-layer net, and trained shortcuts
  // carry only structure learned from the data
  return net;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

ProbVector forward(const Mlp& net, const BitVector& input) {
  check_dims(net, input.size(), "forward");
  return forward_impl(net, input).out;
}

ProbVector forward_real(const Mlp& net, const ProbVector& input) {
  check_dims(net, input.size(), "forward_real");
  return forward_impl(net, input).out;
}

double pair_probability(const ProbVector& p, const BitVector& target) {
  if (p.size() != target.size())
    throw std::invalid_argument("pair_probability: length mismatch");
  double prod = 1.0;
  for (size_t i = 0; i < p.size(); ++i) prod *= target[i] ? p[i] : 1.0 - p[i];
  return prod;
}

double loss_value(const ProbVector& p, const BitVector& target, Loss loss) {
  if (p.size() != target.size())
    throw std::invalid_argument("loss_value: length mismatch");
  double total = 0.0;
  if (loss == Loss::cross_entropy) {
    for (size_t k = 0; k < p.size(); ++k) {
      // the clamp would silently swallow a NaN probability
      if (!std::isfinite(p[k])) return p[k];
      const double q =
          std::min(1.0 - kProbClamp, std::max(kProbClamp, p[k]));
      total -= target[k] ? std::log(q) : std::log(1.0 - q);
    }
  } else {
    for (size_t k = 0; k < p.size(); ++k) {
      const double d = p[k] - (target[k] ? 1.0 : 0.0);
      total += d * d;
    }
  }
  return total;
}

double sgd_step(Mlp& net, const BitVector& input, const BitVector& target,
                const TrainConfig& cfg) {
  check_dims(net, input.size(), "sgd_step");
  if (static_cast<int>(target.size()) != net.n_out)
    throw std::invalid_argument("sgd_step: target size mismatch");
  const Activations act = forward_impl(net, input);
  const double loss = loss_value(act.out, target, cfg.loss);
  if (!std::isfinite(loss))
    throw NumericError("sgd_step: non-finite loss");
  ProbVector delta;
  output_delta(act.out, target, cfg.loss, delta);
  backprop_update(net, input, act, delta, cfg.eta, nullptr);
  return loss;
}

double autoencoder_step(Mlp& first, Mlp& second, const BitVector& input,
                        const TrainConfig& cfg) {
  if (first.n_out != second.n_in)
    throw std::invalid_argument("autoencoder_step: chain size mismatch");
  check_dims(first, input.size(), "autoencoder_step");
  const Activations a1 = forward_impl(first, input);
  const Activations a2 = forward_impl(second, a1.out);
  const double loss = loss_value(a2.out, input, cfg.loss);
  if (!std::isfinite(loss))
    throw NumericError("autoencoder_step: non-finite loss");
  ProbVector delta2;
  output_delta(a2.out, input, cfg.loss, delta2);
  ProbVector delta_mid;  // d loss / d (inner layer values)
  backprop_update(second, a1.out, a2, delta2, cfg.eta, &delta_mid);
  // inner layer is the first net's sigmoid output
  ProbVector delta1(first.n_out);
  for (int k = 0; k < first.n_out; ++k)
    delta1[k] = delta_mid[k] * a1.out[k] * (1.0 - a1.out[k]);
  backprop_update(first, input, a1, delta1, cfg.eta, nullptr);
  return loss;
}

double chain_loss(const Mlp& first, const Mlp& second, const BitVector& input,
                  Loss loss) {
  return loss_value(forward_real(second, forward(first, input)), input, loss);
}

namespace {

// Shared Gray-code walk over all 2^n inputs; yields the hidden-layer
// pre-activations and the direct-path output contribution W_io.x for each
// input index. The incremental sums are refreshed periodically so rounding
// drift cannot accumulate.
template <class Fn>
void gray_walk(const Mlp& net, Fn&& per_input) {
  const int n = net.n_in;
  const uint32_t count = uint32_t{1} << n;
  // column-major copies so single-bit flips touch contiguous memory
  std::vector<double> cols_h(static_cast<size_t>(n) * net.n_hidden);
  for (int h = 0; h < net.n_hidden; ++h)
    for (int i = 0; i < n; ++i)
      cols_h[static_cast<size_t>(i) * net.n_hidden + h] =
          net.w_ih[static_cast<size_t>(h) * net.n_in + i];
  std::vector<double> cols_o(static_cast<size_t>(n) * net.n_out);
  for (int o = 0; o < net.n_out; ++o)
    for (int i = 0; i < n; ++i)
      cols_o[static_cast<size_t>(i) * net.n_out + o] =
          net.w_io[static_cast<size_t>(o) * net.n_in + i];

  std::vector<double> z1(net.b_h);
  std::vector<double> zio(static_cast<size_t>(net.n_out), 0.0);
  auto refresh = [&](uint32_t code) {
    z1 = net.b_h;
    std::fill(zio.begin(), zio.end(), 0.0);
    for (int i = 0; i < n; ++i)
      if ((code >> (n - 1 - i)) & 1u) {
        const double* ch = &cols_h[static_cast<size_t>(i) * net.n_hidden];
        for (int h = 0; h < net.n_hidden; ++h) z1[h] += ch[h];
        const double* co = &cols_o[static_cast<size_t>(i) * net.n_out];
        for (int o = 0; o < net.n_out; ++o) zio[o] += co[o];
      }
  };

  uint32_t code = 0;  // Gray code of step k
  per_input(code, z1.data(), zio.data());
  for (uint32_t k = 1; k < count; ++k) {
    const int bit = std::countr_zero(k);      // flipped integer bit position
    const int input_pos = n - 1 - bit;        // msb-first input index
    code ^= uint32_t{1} << bit;
    if ((k & 0xFFFu) == 0) {
      refresh(code);
    } else {
      const double* ch = &cols_h[static_cast<size_t>(input_pos) * net.n_hidden];
      const double* co = &cols_o[static_cast<size_t>(input_pos) * net.n_out];
      if ((code >> bit) & 1u) {
        for (int h = 0; h < net.n_hidden; ++h) z1[h] += ch[h];
        for (int o = 0; o < net.n_out; ++o) zio[o] += co[o];
      } else {
        for (int h = 0; h < net.n_hidden; ++h) z1[h] -= ch[h];
        for (int o = 0; o < net.n_out; ++o) zio[o] -= co[o];
      }
    }
    per_input(code, z1.data(), zio.data());
  }
}

}  // namespace

LanguageTable materialize_net_table(const Mlp& net) {
  if (net.n_in != net.n_out)
    throw std::invalid_argument("materialize_net_table: n_in != n_out");
  if (net.n_in > kMaxSpaceBits)
    throw ConfigError("materialize_net_table: n exceeds space limit");
  LanguageTable table;
  table.n = net.n_in;
  table.signals.resize(size_t{1} << net.n_in);
  std::vector<double> h(net.n_hidden);
  gray_walk(net, [&](uint32_t index, const double* z1, const double* zio) {
    for (int j = 0; j < net.n_hidden; ++j) h[j] = sigmoid(z1[j]);
    uint32_t out = 0;
    for (int o = 0; o < net.n_out; ++o) {
      double z = net.b_o[o] + zio[o];
      const double* row = &net.w_ho[static_cast<size_t>(o) * net.n_hidden];
      for (int j = 0; j < net.n_hidden; ++j) z += row[j] * h[j];
      // sigma(z) > 0.5 exactly when z > 0, so decide() needs no sigmoid here
      out |= static_cast<uint32_t>(z > 0.0) << (net.n_out - 1 - o);
    }
    table.signals[index] = out;
  });
  return table;
}

void forward_all(const Mlp& net,
                 const std::function<void(uint32_t, const ProbVector&)>& fn) {
  if (net.n_in > kMaxSpaceBits)
    throw ConfigError("forward_all: n exceeds space limit");
  ProbVector h(net.n_hidden), p(net.n_out);
  gray_walk(net, [&](uint32_t index, const double* z1, const double* zio) {
    for (int j = 0; j < net.n_hidden; ++j) h[j] = sigmoid(z1[j]);
    for (int o = 0; o < net.n_out; ++o) {
      double z = net.b_o[o] + zio[o];
      const double* row = &net.w_ho[static_cast<size_t>(o) * net.n_hidden];
      for (int j = 0; j < net.n_hidden; ++j) z += row[j] * h[j];
      p[o] = sigmoid(z);
    }
    fn(index, p);
  });
}

}  // namespace ilm
