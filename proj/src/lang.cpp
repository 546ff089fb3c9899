#include "ilm/lang.hpp"

#include <string>

namespace ilm {

uint32_t bits_to_index(const BitVector& bits) {
  uint32_t index = 0;
  for (uint8_t b : bits) index = (index << 1) | (b & 1u);
  return index;
}

BitVector index_to_bits(uint32_t index, int n) {
  BitVector bits(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) bits[i] = (index >> (n - 1 - i)) & 1u;
  return bits;
}

BitVector decide(const ProbVector& p) {
  BitVector bits(p.size());
  for (size_t i = 0; i < p.size(); ++i) bits[i] = p[i] > 0.5 ? 1 : 0;
  return bits;
}

ProbVector embed(const BitVector& bits) {
  ProbVector p(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) p[i] = bits[i] ? 1.0 : 0.0;
  return p;
}

std::vector<BitVector> enumerate_space(int n) {
  if (n < 1 || n > kMaxSpaceBits)
    throw ConfigError("enumerate_space: n must be in [1, " +
                      std::to_string(kMaxSpaceBits) + "], got " +
                      std::to_string(n));
  std::vector<BitVector> space;
  space.reserve(size_t{1} << n);
  for (uint32_t k = 0; k < (uint32_t{1} << n); ++k)
    space.push_back(index_to_bits(k, n));
  return space;
}

LanguageTable materialize_language(
    const std::function<BitVector(const BitVector&)>& encode, int n) {
  if (n < 1 || n > kMaxSpaceBits)
    throw ConfigError("materialize_language: n out of range");
  LanguageTable table;
  table.n = n;
  table.signals.resize(size_t{1} << n);
  for (uint32_t m = 0; m < (uint32_t{1} << n); ++m)
    table.signals[m] = bits_to_index(encode(index_to_bits(m, n)));
  return table;
}

}  // namespace ilm
