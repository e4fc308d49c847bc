#pragma once

#include <array>
#include <cstdint>

#include "radaug/image.hpp"

namespace radaug {

/// Row-major 3x3 matrix acting on homogeneous (row, col, 1) column vectors.
using Matrix3 = std::array<std::array<double, 3>, 3>;

Matrix3 identity_matrix();
Matrix3 multiply(const Matrix3& a, const Matrix3& b);
double determinant(const Matrix3& m);
/// Throws ParameterError when |det| is below 1e-12.
Matrix3 invert(const Matrix3& m);

/// Geometric augmentation parameters. "x" is the row axis and "y" the column
/// axis, matching the image convention.
struct AffineParams {
  double rotation = 0.0;  ///< radians
  double scale_x = 1.0;
  double scale_y = 1.0;
  double shear_x = 0.0;  ///< row += shear_x * col
  double shear_y = 0.0;  ///< col += shear_y * row
  double translate_r = 0.0;
  double translate_c = 0.0;
  double center_r = 0.0;
  double center_c = 0.0;

  /// Identity parameters centred on the image centre ((rows-1)/2, (cols-1)/2).
  static AffineParams identity_for(std::int64_t rows, std::int64_t cols);

  friend bool operator==(const AffineParams&, const AffineParams&) = default;
};

/// Forward (source -> destination) matrix
///   T(center) * Translate * Rotate * Shear * Scale * T(-center)
/// where Rotate maps (dr, dc) to (cos*dr + sin*dc, -sin*dr + cos*dc).
/// Throws ParameterError for non-positive scales, non-finite fields or a
/// singular result.
Matrix3 compose_matrix(const AffineParams& p);

/// Pull-maps every output pixel through the inverse matrix and samples the
/// nearest source pixel. Output has the input's dimensions.
Image affine_transform(const Image& img, const AffineParams& p, FillMode fill);

/// Uniform sampling ranges. Translation is a fraction of the image extent.
struct AffineRanges {
  double rotation_min = -0.5235987755982988;  // -30 degrees
  double rotation_max = 0.5235987755982988;
  double scale_min = 0.8;
  double scale_max = 1.2;
  double shear_min = -0.2;
  double shear_max = 0.2;
  double translate_min = -0.1;
  double translate_max = 0.1;

  /// All ranges collapsed onto the identity.
  static AffineRanges identity();
  /// Throws ParameterError for inverted ranges, a scale range touching 0 or a
  /// shear bound with magnitude >= 1 (which could make a draw singular).
  void validate() const;

  friend bool operator==(const AffineRanges&, const AffineRanges&) = default;
};

struct AffineSampler {
  AffineRanges ranges;
  std::uint64_t seed = 0;
};

/// Draws parameters for an image of the given extent. Deterministic in
/// (sampler.seed, k); centre is the image centre. Throws ParameterError when
/// the ranges fail AffineRanges::validate().
AffineParams draw_params(const AffineSampler& sampler, std::uint64_t k, std::int64_t rows,
                         std::int64_t cols);

}  // namespace radaug
