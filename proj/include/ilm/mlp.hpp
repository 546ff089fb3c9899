#pragma once
// One-hidden-layer sigmoid networks trained by per-example SGD, plus the
// chained autoencoder step. Gradients are hand-derived and checked against
// central finite differences in the tests.

#include "ilm/lang.hpp"
#include "ilm/rng.hpp"

#include <functional>
#include <stdexcept>

namespace ilm {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Loss { cross_entropy, squared_error };

struct TrainConfig {
  double eta = 1.0;
  Loss loss = Loss::cross_entropy;
  int epochs = 20;
};

// All-to-all feedforward net: the input feeds the hidden layer and, through
// zero-initialized shortcut weights, the output layer directly. The shortcut
// path lets a word track a single fact linearly; without it the autoencoder
// chain cannot evolve an expressive language at all.
struct Mlp {
  int n_in = 0, n_hidden = 0, n_out = 0;
  std::vector<double> w_ih;  // n_hidden x n_in, row-major
  std::vector<double> b_h;   // n_hidden
  std::vector<double> w_ho;  // n_out x n_hidden
  std::vector<double> w_io;  // n_out x n_in, direct input->output
  std::vector<double> b_o;   // n_out

  size_t parameter_count() const {
    return w_ih.size() + b_h.size() + w_ho.size() + w_io.size() + b_o.size();
  }
  bool finite() const;
  bool operator==(const Mlp&) const = default;
};

// Glorot-uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
Mlp init_glorot(int n_in, int n_hidden, int n_out, Rng& rng);

double sigmoid(double z);

// sigma(W_ho . sigma(W_ih . x + b_h) + W_io . x + b_o); every element
// strictly in (0,1).
ProbVector forward(const Mlp& net, const BitVector& input);
ProbVector forward_real(const Mlp& net, const ProbVector& input);

// Probability the output distribution p assigns to the exact bit pattern
// `target`: product of p_i where the bit is 1 and (1-p_i) where it is 0.
double pair_probability(const ProbVector& p, const BitVector& target);

double loss_value(const ProbVector& p, const BitVector& target, Loss loss);

// One SGD step on a single example; returns the pre-update loss. Throws
// NumericError if the loss is not finite.
double sgd_step(Mlp& net, const BitVector& input, const BitVector& target,
                const TrainConfig& cfg);

// One SGD step through second(first(input)) with target = input. The inner
// layer carries the real-valued output of `first`, never decided bits, and
// gradients reach both parameter sets.
double autoencoder_step(Mlp& first, Mlp& second, const BitVector& input,
                        const TrainConfig& cfg);

// Loss the chained network currently assigns to `input` (no update).
double chain_loss(const Mlp& first, const Mlp& second, const BitVector& input,
                  Loss loss);

// Tabulates input index -> decide(forward(net, input)) over all 2^n_in
// inputs. Requires n_in == n_out. Gray-coded enumeration keeps the first
// layer incremental, so this is the fast path for materializing encoder and
// decoder language tables.
LanguageTable materialize_net_table(const Mlp& net);

// Calls fn(input_index, p) for every input index with p = forward(net, input).
// Enumeration order is unspecified.
void forward_all(const Mlp& net,
                 const std::function<void(uint32_t, const ProbVector&)>& fn);

}  // namespace ilm
