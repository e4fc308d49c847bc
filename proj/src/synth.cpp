#include "radaug/synth.hpp"

#include <cmath>
#include <cstdio>
#include <system_error>

#include "radaug/errors.hpp"
#include "radaug/io.hpp"
#include "radaug/seed.hpp"

namespace radaug::synth {

Image random_image(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
  Image img(rows, cols);
  SplitMix64 rng(seed);
  for (std::uint8_t& px : img.pixels()) px = static_cast<std::uint8_t>(rng() >> 56);
  return img;
}

Image coordinate_image(std::int64_t rows, std::int64_t cols) {
  Image img(rows, cols);
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) img(r, c) = static_cast<std::uint8_t>((r * cols + c) % 256);
  }
  return img;
}

Image render_shape(Shape shape, std::int64_t side, std::uint64_t seed) {
  if (side < 8) throw ParameterError("shape images need side >= 8");
  SplitMix64 rng(seed);
  Image img(side, side);
  for (std::uint8_t& px : img.pixels()) px = static_cast<std::uint8_t>(rng.below(41));

  const double s = static_cast<double>(side);
  const double cr = rng.uniform(0.35 * s, 0.65 * s);
  const double cc = rng.uniform(0.35 * s, 0.65 * s);
  const double rad = rng.uniform(0.18 * s, 0.3 * s);
  const auto ink = static_cast<std::uint8_t>(150 + rng.below(106));

  for (std::int64_t r = 0; r < side; ++r) {
    for (std::int64_t c = 0; c < side; ++c) {
      const double dr = static_cast<double>(r) - cr;
      const double dc = static_cast<double>(c) - cc;
      bool inside = false;
      switch (shape) {
        case Shape::kCircle:
          inside = dr * dr + dc * dc <= rad * rad;
          break;
        case Shape::kSquare:
          inside = std::fabs(dr) <= 0.85 * rad && std::fabs(dc) <= 0.85 * rad;
          break;
        case Shape::kTriangle:
          // Apex up, base at dr = +rad.
          inside = dr >= -rad && dr <= rad && std::fabs(dc) <= (dr + rad) / 2.0;
          break;
      }
      if (inside) img(r, c) = ink;
    }
  }
  return img;
}

void write_shapes_dataset(const std::filesystem::path& root, std::int64_t per_class,
                          std::int64_t side, std::uint64_t seed) {
  if (per_class < 1) throw ParameterError("per_class must be >= 1");
  const auto& names = shape_class_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::filesystem::path dir = root / names[k];
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw WriteError("cannot create " + dir.string() + ": " + ec.message());
    for (std::int64_t i = 0; i < per_class; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "%04lld.pgm", static_cast<long long>(i));
      const std::uint64_t item_seed = derive_item_seed(seed, k, static_cast<std::uint64_t>(i));
      write_image(render_shape(static_cast<Shape>(k), side, item_seed), dir / name);
    }
  }
}

}  // namespace radaug::synth
