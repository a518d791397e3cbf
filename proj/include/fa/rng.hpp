#pragma once

#include <cstdint>

namespace fa {

/// Counter-based generator: draw i of stream (seed, stream) is the SplitMix64
/// finalizer applied to seed + (stream * 2^32 + i + 1) * 0x9E3779B97F4A7C15.
/// The output sequence is fixed by this formula alone, so any implementation
/// reproduces it.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), counter_(stream << 32) {}

  std::uint64_t next() noexcept {
    ++counter_;
    std::uint64_t z = seed_ + counter_ * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection of the biased tail.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound + 1) % bound;
    std::uint64_t r = next();
    while (r > limit) r = next();
    return r % bound;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace fa
