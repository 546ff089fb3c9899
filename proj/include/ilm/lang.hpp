#pragma once
// Binary meaning/signal spaces, the decision map and materialized language
// tables. Meanings and signals are structurally identical bit vectors; the
// role is documented at use sites.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ilm {

// A meaning or a signal: n bits, each exactly 0 or 1. Bit 0 is the most
// significant bit of the integer index, so (1,0,0) has index 4.
using BitVector = std::vector<uint8_t>;

// Raw network outputs: n values in [0,1].
using ProbVector = std::vector<double>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxSpaceBits = 24;

uint32_t bits_to_index(const BitVector& bits);
BitVector index_to_bits(uint32_t index, int n);

// delta(x) = (x <= 0.5 ? 0 : 1), applied component-wise.
BitVector decide(const ProbVector& p);

// 0/1 bits to 0.0/1.0 reals.
ProbVector embed(const BitVector& bits);

// All 2^n bit vectors in ascending index order. Eager; refuses n outside
// [1, kMaxSpaceBits].
std::vector<BitVector> enumerate_space(int n);

// Total map meaning index -> signal index, size 2^n.
struct LanguageTable {
  int n = 0;
  std::vector<uint32_t> signals;

  size_t size() const { return signals.size(); }
  uint32_t operator[](uint32_t meaning) const { return signals[meaning]; }
  BitVector signal_bits(uint32_t meaning) const {
    return index_to_bits(signals[meaning], n);
  }
  bool operator==(const LanguageTable&) const = default;
};

// Tabulates encode over every meaning in [0, 2^n). encode must be total.
LanguageTable materialize_language(
    const std::function<BitVector(const BitVector&)>& encode, int n);

}  // namespace ilm
