#pragma once

// Seeded randomness for sampling strategies. std::mt19937_64 is fully
// specified by the standard, and the bounded draw below avoids
// std::uniform_int_distribution (whose output is implementation-defined),
// so seeded runs reproduce bit-for-bit across platforms.

#include <cstdint>
#include <limits>
#include <random>

namespace sqrtlab {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, bound) by rejection sampling; bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    for (;;) {
      std::uint64_t x = gen_();
      std::uint64_t r = x % bound;
      if (x - r <= std::numeric_limits<std::uint64_t>::max() - (bound - 1))
        return r;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

/// Derives an independent stream seed from (seed, salt); used to give each
/// modulus its own deterministic stream regardless of scheduling order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace sqrtlab
