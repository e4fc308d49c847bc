#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "radaug/image.hpp"

namespace radaug::synth {

/// Seeded uniform-noise image.
Image random_image(std::int64_t rows, std::int64_t cols, std::uint64_t seed);

/// Pixel value encodes position: (r * cols + c) mod 256.
Image coordinate_image(std::int64_t rows, std::int64_t cols);

enum class Shape { kCircle, kSquare, kTriangle };

inline const std::vector<std::string>& shape_class_names() {
  static const std::vector<std::string> names{"circle", "square", "triangle"};
  return names;
}

/// One filled shape with random centre, size and intensity on a noisy
/// background. Deterministic in seed.
Image render_shape(Shape shape, std::int64_t side, std::uint64_t seed);

/// Writes root/<circle|square|triangle>/<index>.pgm, per_class images each.
void write_shapes_dataset(const std::filesystem::path& root, std::int64_t per_class,
                          std::int64_t side, std::uint64_t seed);

}  // namespace radaug::synth
