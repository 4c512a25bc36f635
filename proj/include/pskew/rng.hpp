#pragma once

#include <cstdint>

namespace pskew {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// SplitMix64: seedable 64-bit generator with cheap substream derivation.
// Trial i under prime index j uses substream(seed, j, i), so transcripts are
// reproducible and independent of evaluation order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  bool next_bit() { return (next() & 1) != 0; }

  // Uniform value in [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t salt_a,
                            std::uint64_t salt_b) {
  const std::uint64_t a = mix64(seed ^ (0x9E3779B97F4A7C15ULL * (salt_a + 1)));
  const std::uint64_t b = mix64(a ^ (0xC2B2AE3D27D4EB4FULL * (salt_b + 1)));
  return SplitMix64(b);
}

}  // namespace pskew
