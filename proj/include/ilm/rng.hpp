#pragma once
// Deterministic seeding and sampling. The engine is mt19937_64; distributions
// are hand-rolled so byte-identical output does not depend on the standard
// library's distribution implementations.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ilm {

inline constexpr const char* kRngId = "mt19937_64+splitmix64-streams";

uint64_t splitmix64(uint64_t x);

// Child seed for (master, replicate, stream). The final mix is bijective in
// the replicate id, so distinct replicates never collide for a fixed master
// seed and stream tag.
uint64_t derive_seed(uint64_t master, uint64_t replicate, std::string_view stream);

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // [0,1) with 53-bit resolution
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on [0, bound), unbiased via rejection
  uint64_t below(uint64_t bound);

  // Fisher-Yates
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

  // k distinct values from [0, space), insertion-ordered (Floyd's algorithm)
  std::vector<uint32_t> sample_distinct(uint32_t k, uint64_t space);

 private:
  std::mt19937_64 eng_;
};

}  // namespace ilm
