#pragma once

// SplitMix64 (Steele, Lea & Flood's mixer, as in Vigna's reference code):
// 64-bit state, one add + two xor-shift-multiplies per draw. Chosen as the
// benchmark RNG because the whole sequence is pinned down by these few lines
// — no implementation-defined std::distribution in sight — so seeded
// generation is byte-identical across platforms and standard libraries.

#include <cstdint>
#include <string>

namespace cbpp {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), rejection-sampled so the distribution is exact.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t limit = ~0ULL - ~0ULL % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  // Uniform integer in [lo, hi], inclusive.
  long long next_int(long long lo, long long hi) {
    return lo + static_cast<long long>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Uniform in [0, 1), 53 significant bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Stream splitting: hash a label into the seed (FNV-1a), then scramble once,
// so independently labeled streams never overlap in practice.
inline std::uint64_t derive_stream(std::uint64_t seed, const std::string& label) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  SplitMix64 mix(seed ^ h);
  return mix.next();
}

}  // namespace cbpp
