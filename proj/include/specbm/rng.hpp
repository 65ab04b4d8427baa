#pragma once

#include <cstdint>

namespace specbm {

// splitmix64 output function. mix64(x) is the finalizer applied to the
// advancing state; it is bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based PRNG: value k of the stream with the given seed is
// mix64(seed + (k+1) * GOLDEN), i.e. the splitmix64 sequence started at
// state = seed, addressable at any index without sequential state. This
// makes every draw a pure function of (seed, counter), so parallel
// consumers can evaluate disjoint counters in any order and still agree
// bit-for-bit with a serial sweep.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t raw(std::uint64_t counter) const {
    return mix64(seed_ + (counter + 1) * kGolden);
  }

  // Uniform double in [0,1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(raw(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Stable seed derivation: combine(a, b) folds a 64-bit word into a seed
// asymmetrically (so combine(x,y) != combine(y,x) in general). Experiment
// trial seeds are derive_seed(master, i, j, t) = successive combines; each
// cell/trial seed depends only on its own indices, never on execution order.
inline std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + (b + 1) * CounterRng::kGolden);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i,
                                 std::uint64_t j, std::uint64_t t) {
  return seed_combine(seed_combine(seed_combine(master, i), j), t);
}

}  // namespace specbm
