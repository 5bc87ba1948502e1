#pragma once

#include <cstdint>

namespace infcen {

// SplitMix64 keyed by (seed, stream). Every (seed, stream) pair yields an
// independent deterministic sequence, and streams are cheap to construct,
// so callers key them by sample index: the result of a parallel run is then
// a pure function of the seed, not of the worker schedule.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^
               mix(stream * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull)) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return next_unit() < p; }

  // Uniform in [0,bound) without modulo bias (Lemire's multiply-shift).
  std::uint32_t next_below(std::uint32_t bound) noexcept {
    std::uint64_t x = next_u64() >> 32;
    std::uint64_t m = x * bound;
    auto lo = static_cast<std::uint32_t>(m);
    if (lo < bound) {
      std::uint32_t threshold = (0u - bound) % bound;
      while (lo < threshold) {
        x = next_u64() >> 32;
        m = x * bound;
        lo = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace infcen
