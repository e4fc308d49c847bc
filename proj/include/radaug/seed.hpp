#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>

#include "radaug/image.hpp"

namespace radaug {

/// One step of the SplitMix64 generator applied to `x` (add the golden gamma,
/// then the variant-13 finalizer). Bijective on 64-bit integers.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Small counter-based generator with a fully specified output sequence.
/// Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    const std::uint64_t out = splitmix64(state_);
    state_ += 0x9E3779B97F4A7C15ULL;
    return out;
  }

  /// Integer in [0, n) by 128-bit multiply-high. n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

  /// Double in [0, 1) with 53 random bits.
  double unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Double in [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi) noexcept {
    return lo == hi ? lo : std::clamp(lo + (hi - lo) * unit(), lo, hi);
  }

 private:
  std::uint64_t state_;
};

/// seed = s(s(s(master) ^ source) ^ augmentation) with s = splitmix64.
/// For a fixed (master, source) the map is injective in `augmentation`.
constexpr std::uint64_t derive_item_seed(std::uint64_t master, std::uint64_t source,
                                         std::uint64_t augmentation) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ source) ^ augmentation);
}

/// Uniform pole over rows x cols, deterministic in seed.
Pole pick_pole(std::uint64_t seed, std::int64_t rows, std::int64_t cols);

}  // namespace radaug
