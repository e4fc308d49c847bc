#include "radaug/image.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "radaug/errors.hpp"

namespace radaug {

const char* to_string(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::kMissingFile:
      return "missing file";
    case DecodeErrorKind::kMalformedHeader:
      return "malformed header";
    case DecodeErrorKind::kTruncatedData:
      return "truncated data";
    case DecodeErrorKind::kUnsupportedDepth:
      return "unsupported depth";
    case DecodeErrorKind::kUnsupportedFormat:
      return "unsupported format";
  }
  return "decode error";
}

std::string_view to_string(FillMode mode) {
  return mode == FillMode::kZero ? "zero" : "clamp";
}

FillMode parse_fill_mode(std::string_view text) {
  if (text == "zero") return FillMode::kZero;
  if (text == "clamp") return FillMode::kClamp;
  throw ParameterError("unknown fill mode '" + std::string(text) + "' (expected zero|clamp)");
}

namespace {

std::size_t checked_area(std::int64_t rows, std::int64_t cols) {
  if (rows < 1 || cols < 1) {
    throw ParameterError("image dimensions must be positive, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  // Keep r * cols + c inside int64.
  if (rows > std::numeric_limits<std::int32_t>::max() / cols) {
    throw ParameterError("image dimensions too large");
  }
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

}  // namespace

Image::Image(std::int64_t rows, std::int64_t cols, std::uint8_t value)
    : rows_(rows), cols_(cols), pixels_(checked_area(rows, cols), value) {}

Image::Image(std::int64_t rows, std::int64_t cols, std::vector<std::uint8_t> pixels)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
  if (pixels_.size() != checked_area(rows, cols)) {
    throw ParameterError("pixel buffer holds " + std::to_string(pixels_.size()) +
                         " values, expected " + std::to_string(rows * cols));
  }
}

std::uint8_t get_pixel(const Image& img, std::int64_t r, std::int64_t c) {
  if (!img.contains(r, c)) {
    throw AddressingError("pixel (" + std::to_string(r) + ", " + std::to_string(c) +
                          ") outside " + std::to_string(img.rows()) + "x" +
                          std::to_string(img.cols()) + " image");
  }
  return img(r, c);
}

std::int64_t round_half_away(double t) {
  if (!std::isfinite(t)) throw NumericError("cannot round a non-finite value");
  // 2^63 is exactly representable; anything at or beyond it overflows.
  constexpr double kLimit = 9223372036854775808.0;
  const double a = std::fabs(t);
  double f = std::floor(a);
  // a - f is exact, so this is floor(a + 0.5) without the rounding error of
  // the addition (0.49999999999999994 + 0.5 == 1.0 in binary64).
  if (a - f >= 0.5) f += 1.0;
  if (f >= kLimit) throw NumericError("rounded value out of int64 range");
  const auto magnitude = static_cast<std::int64_t>(f);
  return t < 0 ? -magnitude : magnitude;
}

Image resize_nearest(const Image& img, std::int64_t out_rows, std::int64_t out_cols) {
  Image out(out_rows, out_cols);
  for (std::int64_t r = 0; r < out_rows; ++r) {
    const std::int64_t sr = r * img.rows() / out_rows;
    for (std::int64_t c = 0; c < out_cols; ++c) {
      out(r, c) = img(sr, c * img.cols() / out_cols);
    }
  }
  return out;
}

}  // namespace radaug
