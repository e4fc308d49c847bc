#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace radaug {

/// Rule for samples that fall outside the source image.
enum class FillMode : std::uint8_t {
  kZero,   ///< write intensity 0
  kClamp,  ///< read the nearest border pixel
};

std::string_view to_string(FillMode mode);
/// Parses "zero" / "clamp"; throws ParameterError otherwise.
FillMode parse_fill_mode(std::string_view text);

/// Polar origin: u is the row, v the column.
struct Pole {
  std::int64_t u = 0;
  std::int64_t v = 0;

  friend bool operator==(const Pole&, const Pole&) = default;
};

/// 8-bit grayscale raster, row-major. Rows and cols are always >= 1.
///
/// The first index is the row; it is the axis the radial x-offset is added
/// to, so a polar axis at angle 0 points toward increasing row index.
class Image {
 public:
  /// Constant image. Throws ParameterError when rows or cols < 1.
  Image(std::int64_t rows, std::int64_t cols, std::uint8_t value = 0);
  /// Throws ParameterError when pixels.size() != rows * cols.
  Image(std::int64_t rows, std::int64_t cols, std::vector<std::uint8_t> pixels);

  std::int64_t rows() const noexcept { return rows_; }
  std::int64_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool contains(std::int64_t r, std::int64_t c) const noexcept {
    return static_cast<std::uint64_t>(r) < static_cast<std::uint64_t>(rows_) &&
           static_cast<std::uint64_t>(c) < static_cast<std::uint64_t>(cols_);
  }
  bool contains(const Pole& p) const noexcept { return contains(p.u, p.v); }

  /// Unchecked access.
  std::uint8_t operator()(std::int64_t r, std::int64_t c) const noexcept {
    return pixels_[static_cast<std::size_t>(r * cols_ + c)];
  }
  std::uint8_t& operator()(std::int64_t r, std::int64_t c) noexcept {
    return pixels_[static_cast<std::size_t>(r * cols_ + c)];
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> row(std::int64_t r) const noexcept {
    return std::span<const std::uint8_t>(pixels_).subspan(
        static_cast<std::size_t>(r * cols_), static_cast<std::size_t>(cols_));
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::int64_t rows_;
  std::int64_t cols_;
  std::vector<std::uint8_t> pixels_;
};

/// Checked pixel read; throws AddressingError outside the image.
std::uint8_t get_pixel(const Image& img, std::int64_t r, std::int64_t c);

/// Round half away from zero: 0.5 -> 1, -0.5 -> -1, 2.3 -> 2.
/// Throws NumericError for non-finite input or results outside int64.
std::int64_t round_half_away(double t);

/// Total pixel lookup for any integer coordinate, applying `fill` outside.
inline std::uint8_t resolve_sample(const Image& img, std::int64_t r, std::int64_t c,
                                   FillMode fill) noexcept {
  if (img.contains(r, c)) return img(r, c);
  if (fill == FillMode::kZero) return 0;
  r = r < 0 ? 0 : (r >= img.rows() ? img.rows() - 1 : r);
  c = c < 0 ? 0 : (c >= img.cols() ? img.cols() - 1 : c);
  return img(r, c);
}

/// Nearest-neighbour resize: output (r, c) reads (r * rows / out_rows, c * cols / out_cols).
Image resize_nearest(const Image& img, std::int64_t out_rows, std::int64_t out_cols);

}  // namespace radaug
