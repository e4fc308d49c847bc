#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "radaug/image.hpp"

namespace radaug {

/// Sampling grid of the radial transform: one output row per ray, one
/// output column per integer radius 0..radii-1.
struct RadialParams {
  std::int64_t rays = 1;
  std::int64_t radii = 1;
  FillMode fill = FillMode::kZero;

  /// rays = source rows, radii = source cols.
  static RadialParams for_image(const Image& img, FillMode fill = FillMode::kZero);

  friend bool operator==(const RadialParams&, const RadialParams&) = default;
};

/// Radius count that reaches every pixel from any pole: ceil(hypot(rows, cols)).
/// Opt-in alternative to the default radii = cols.
std::int64_t diagonal_radii(const Image& img);

struct RadialOutput {
  Image image;
  Pole pole;
  RadialParams params;
};

/// Integer offset (rows, cols) of a sample from the pole.
struct RadialOffset {
  std::int64_t dr = 0;
  std::int64_t dc = 0;

  friend bool operator==(const RadialOffset&, const RadialOffset&) = default;
};

/// 2*pi*m/rays. Throws ParameterError unless 0 <= m < rays.
double ray_angle(std::int64_t m, std::int64_t rays);

/// (round(r cos theta), round(r sin theta)), rounding half away from zero.
RadialOffset radial_offsets(std::int64_t r, double theta);

/// Precomputed offset table for one (rays, radii) grid.
///
/// Building the table costs rays * radii trig/round evaluations; applying it
/// to a pole is a gather with a bounds check per cell. Reuse one kernel for
/// every pole of the same grid.
class RadialKernel {
 public:
  /// Throws ParameterError when rays < 1 or radii < 1.
  explicit RadialKernel(RadialParams params);

  const RadialParams& params() const noexcept { return params_; }

  /// Offsets of ray m, radii 0..radii-1.
  std::span<const RadialOffset> ray(std::int64_t m) const noexcept {
    return std::span<const RadialOffset>(offsets_).subspan(
        static_cast<std::size_t>(m * params_.radii), static_cast<std::size_t>(params_.radii));
  }

  /// Throws ParameterError when the pole is outside img.
  Image apply(const Image& img, const Pole& pole) const;
  /// Writes into `out`, which must already be rays x radii.
  void apply_into(const Image& img, const Pole& pole, Image& out) const;

 private:
  RadialParams params_;
  std::vector<RadialOffset> offsets_;
};

/// Radial transform of img around pole. Throws ParameterError on an invalid
/// pole or grid.
RadialOutput radial_transform(const Image& img, const Pole& pole, const RadialParams& params);

/// Transforms img around every pole in `poles`, distributing the poles over
/// `workers` threads. The result is in pole order regardless of scheduling.
std::vector<Image> radial_transform_batch(const Image& img, std::span<const Pole> poles,
                                          const RadialParams& params, int workers = 1);

/// Streams the transform at every pixel of img as pole, row-major.
///
///   PoleEnumerator e(img, params);
///   while (auto out = e.next()) { ... }
class PoleEnumerator {
 public:
  PoleEnumerator(const Image& img, RadialParams params);

  /// Total number of outputs (rows * cols of the source).
  std::uint64_t count() const noexcept { return total_; }
  std::uint64_t produced() const noexcept { return next_; }

  std::optional<RadialOutput> next();
  /// Variant of next() that reuses `out` and avoids an allocation per pole.
  /// Returns false once exhausted.
  bool next_into(Image& out, Pole& pole);

 private:
  const Image* img_;
  RadialKernel kernel_;
  std::uint64_t total_;
  std::uint64_t next_ = 0;
};

/// Eager wrapper over PoleEnumerator. Memory grows with rows * cols * rays * radii.
std::vector<RadialOutput> enumerate_pole_transforms(const Image& img, const RadialParams& params);

}  // namespace radaug
