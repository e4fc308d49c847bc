#include "radaug/radial.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "parallel.hpp"
#include "radaug/errors.hpp"

namespace radaug {

namespace {

void check_grid(const RadialParams& p) {
  if (p.rays < 1 || p.radii < 1) {
    throw ParameterError("radial grid needs rays >= 1 and radii >= 1, got " +
                         std::to_string(p.rays) + "x" + std::to_string(p.radii));
  }
}

void check_pole(const Image& img, const Pole& pole) {
  if (!img.contains(pole)) {
    throw ParameterError("pole (" + std::to_string(pole.u) + ", " + std::to_string(pole.v) +
                         ") outside " + std::to_string(img.rows()) + "x" +
                         std::to_string(img.cols()) + " image");
  }
}

}  // namespace

RadialParams RadialParams::for_image(const Image& img, FillMode fill) {
  return RadialParams{img.rows(), img.cols(), fill};
}

std::int64_t diagonal_radii(const Image& img) {
  return static_cast<std::int64_t>(
      std::ceil(std::hypot(static_cast<double>(img.rows()), static_cast<double>(img.cols()))));
}

double ray_angle(std::int64_t m, std::int64_t rays) {
  if (rays < 1 || m < 0 || m >= rays) {
    throw ParameterError("ray index " + std::to_string(m) + " outside [0, " +
                         std::to_string(rays) + ")");
  }
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(rays);
}

RadialOffset radial_offsets(std::int64_t r, double theta) {
  if (r < 0) throw ParameterError("radius must be non-negative, got " + std::to_string(r));
  const double rd = static_cast<double>(r);
  return {round_half_away(rd * std::cos(theta)), round_half_away(rd * std::sin(theta))};
}

RadialKernel::RadialKernel(RadialParams params) : params_(params) {
  check_grid(params_);
  offsets_.resize(static_cast<std::size_t>(params_.rays * params_.radii));
  auto* cell = offsets_.data();
  for (std::int64_t m = 0; m < params_.rays; ++m) {
    const double theta = ray_angle(m, params_.rays);
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    for (std::int64_t r = 0; r < params_.radii; ++r, ++cell) {
      const double rd = static_cast<double>(r);
      *cell = {round_half_away(rd * cos_t), round_half_away(rd * sin_t)};
    }
  }
}

Image RadialKernel::apply(const Image& img, const Pole& pole) const {
  Image out(params_.rays, params_.radii);
  apply_into(img, pole, out);
  return out;
}

void RadialKernel::apply_into(const Image& img, const Pole& pole, Image& out) const {
  check_pole(img, pole);
  if (out.rows() != params_.rays || out.cols() != params_.radii) {
    throw ParameterError("output buffer does not match the radial grid");
  }
  const auto rows = static_cast<std::uint64_t>(img.rows());
  const auto cols = static_cast<std::uint64_t>(img.cols());
  const std::uint8_t* src = img.pixels().data();
  std::uint8_t* dst = out.pixels().data();
  const bool zero_fill = params_.fill == FillMode::kZero;

  for (const RadialOffset& off : offsets_) {
    const std::int64_t r = pole.u + off.dr;
    const std::int64_t c = pole.v + off.dc;
    if (static_cast<std::uint64_t>(r) < rows && static_cast<std::uint64_t>(c) < cols) {
      *dst++ = src[static_cast<std::uint64_t>(r) * cols + static_cast<std::uint64_t>(c)];
    } else if (zero_fill) {
      *dst++ = 0;
    } else {
      *dst++ = resolve_sample(img, r, c, FillMode::kClamp);
    }
  }
}

RadialOutput radial_transform(const Image& img, const Pole& pole, const RadialParams& params) {
  check_grid(params);
  check_pole(img, pole);
  RadialKernel kernel(params);
  return RadialOutput{kernel.apply(img, pole), pole, params};
}

std::vector<Image> radial_transform_batch(const Image& img, std::span<const Pole> poles,
                                          const RadialParams& params, int workers) {
  const RadialKernel kernel(params);
  for (const Pole& p : poles) check_pole(img, p);
  std::vector<Image> out(poles.size(), Image(params.rays, params.radii));
  detail::parallel_for(poles.size(), workers,
                       [&](std::size_t i) { kernel.apply_into(img, poles[i], out[i]); });
  return out;
}

PoleEnumerator::PoleEnumerator(const Image& img, RadialParams params)
    : img_(&img),
      kernel_(params),
      total_(static_cast<std::uint64_t>(img.rows()) * static_cast<std::uint64_t>(img.cols())) {}

bool PoleEnumerator::next_into(Image& out, Pole& pole) {
  if (next_ >= total_) return false;
  const auto cols = static_cast<std::uint64_t>(img_->cols());
  pole = Pole{static_cast<std::int64_t>(next_ / cols), static_cast<std::int64_t>(next_ % cols)};
  kernel_.apply_into(*img_, pole, out);
  ++next_;
  return true;
}

std::optional<RadialOutput> PoleEnumerator::next() {
  if (next_ >= total_) return std::nullopt;
  Image out(kernel_.params().rays, kernel_.params().radii);
  Pole pole;
  next_into(out, pole);
  return RadialOutput{std::move(out), pole, kernel_.params()};
}

std::vector<RadialOutput> enumerate_pole_transforms(const Image& img, const RadialParams& params) {
  PoleEnumerator e(img, params);
  std::vector<RadialOutput> out;
  out.reserve(static_cast<std::size_t>(e.count()));
  while (auto o = e.next()) out.push_back(std::move(*o));
  return out;
}

}  // namespace radaug
