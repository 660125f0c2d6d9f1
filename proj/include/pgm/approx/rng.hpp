#pragma once

#include <cstdint>

namespace pgm {

/// Counter-based generator: the stream for (seed, index) is a pure function
/// of the pair, so sample i draws the same numbers whichever worker runs it.
/// SplitMix64 increments over a state derived from both keys.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index) noexcept
      : state_(mix(seed ^ mix(index + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace pgm
