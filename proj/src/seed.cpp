#include "radaug/seed.hpp"

#include <string>

#include "radaug/errors.hpp"

namespace radaug {

Pole pick_pole(std::uint64_t seed, std::int64_t rows, std::int64_t cols) {
  if (rows < 1 || cols < 1) {
    throw ParameterError("pick_pole needs positive dimensions, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  SplitMix64 rng(seed);
  const std::uint64_t index =
      rng.below(static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols));
  const auto c = static_cast<std::uint64_t>(cols);
  return Pole{static_cast<std::int64_t>(index / c), static_cast<std::int64_t>(index % c)};
}

}  // namespace radaug
