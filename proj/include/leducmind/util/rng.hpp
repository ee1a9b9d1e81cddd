#pragma once

#include <cstdint>
#include <random>

namespace leducmind {

// Deterministic random source. mt19937_64's output sequence is pinned by the
// standard; the bounded draw below avoids std::uniform_int_distribution,
// whose mapping is implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, n) via rejection sampling.
  uint32_t next_below(uint32_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return static_cast<uint32_t>(draw % n);
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace leducmind
