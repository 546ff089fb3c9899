#include "ilm/rng.hpp"

#include <stdexcept>
#include <unordered_set>

namespace ilm {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

static uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

uint64_t derive_seed(uint64_t master, uint64_t replicate, std::string_view stream) {
  uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a64(stream));
  return splitmix64(h ^ replicate);
}

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
  const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % bound;
  uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % bound;
}

std::vector<uint32_t> Rng::sample_distinct(uint32_t k, uint64_t space) {
  if (k > space)
    throw std::invalid_argument("Rng::sample_distinct: k exceeds space size");
  std::vector<uint32_t> out;
  out.reserve(k);
  std::unordered_set<uint64_t> seen;
  for (uint64_t j = space - k; j < space; ++j) {
    uint64_t t = below(j + 1);
    if (seen.count(t)) t = j;
    seen.insert(t);
    out.push_back(static_cast<uint32_t>(t));
  }
  return out;
}

}  // namespace ilm
