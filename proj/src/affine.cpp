#include "radaug/affine.hpp"

#include <cmath>
#include <string>

#include "radaug/errors.hpp"
#include "radaug/seed.hpp"

namespace radaug {

namespace {

constexpr double kSingularEps = 1e-12;

Matrix3 translation(double dr, double dc) {
  Matrix3 m = identity_matrix();
  m[0][2] = dr;
  m[1][2] = dc;
  return m;
}

bool finite_params(const AffineParams& p) {
  for (double v : {p.rotation, p.scale_x, p.scale_y, p.shear_x, p.shear_y, p.translate_r,
                   p.translate_c, p.center_r, p.center_c}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

Matrix3 identity_matrix() { return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}; }

Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    }
  }
  return out;
}

double determinant(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Matrix3 invert(const Matrix3& m) {
  const double det = determinant(m);
  if (!std::isfinite(det) || std::fabs(det) < kSingularEps) {
    throw ParameterError("affine matrix is singular (det = " + std::to_string(det) + ")");
  }
  Matrix3 adj{};
  adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  for (auto& row : adj) {
    for (double& v : row) v /= det;
  }
  return adj;
}

AffineParams AffineParams::identity_for(std::int64_t rows, std::int64_t cols) {
  AffineParams p;
  p.center_r = static_cast<double>(rows - 1) / 2.0;
  p.center_c = static_cast<double>(cols - 1) / 2.0;
  return p;
}

Matrix3 compose_matrix(const AffineParams& p) {
  if (!finite_params(p)) throw ParameterError("affine parameters must be finite");
  if (!(p.scale_x > 0.0) || !(p.scale_y > 0.0)) {
    throw ParameterError("affine scale factors must be strictly positive");
  }
  const double cos_t = std::cos(p.rotation);
  const double sin_t = std::sin(p.rotation);
  const Matrix3 rotate{{{cos_t, sin_t, 0.0}, {-sin_t, cos_t, 0.0}, {0.0, 0.0, 1.0}}};
  const Matrix3 shear{{{1.0, p.shear_x, 0.0}, {p.shear_y, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  const Matrix3 scale{{{p.scale_x, 0.0, 0.0}, {0.0, p.scale_y, 0.0}, {0.0, 0.0, 1.0}}};

  Matrix3 m = translation(p.center_r, p.center_c);
  m = multiply(m, translation(p.translate_r, p.translate_c));
  m = multiply(m, rotate);
  m = multiply(m, shear);
  m = multiply(m, scale);
  m = multiply(m, translation(-p.center_r, -p.center_c));

  const double det = determinant(m);
  if (!std::isfinite(det) || std::fabs(det) < kSingularEps) {
    throw ParameterError("affine composition is singular (det = " + std::to_string(det) + ")");
  }
  return m;
}

Image affine_transform(const Image& img, const AffineParams& p, FillMode fill) {
  const Matrix3 inv = invert(compose_matrix(p));
  Image out(img.rows(), img.cols());
  for (std::int64_t r = 0; r < img.rows(); ++r) {
    const double rd = static_cast<double>(r);
    for (std::int64_t c = 0; c < img.cols(); ++c) {
      const double cd = static_cast<double>(c);
      const double sr = inv[0][0] * rd + inv[0][1] * cd + inv[0][2];
      const double sc = inv[1][0] * rd + inv[1][1] * cd + inv[1][2];
      out(r, c) = resolve_sample(img, round_half_away(sr), round_half_away(sc), fill);
    }
  }
  return out;
}

AffineRanges AffineRanges::identity() {
  AffineRanges r;
  r.rotation_min = r.rotation_max = 0.0;
  r.scale_min = r.scale_max = 1.0;
  r.shear_min = r.shear_max = 0.0;
  r.translate_min = r.translate_max = 0.0;
  return r;
}

void AffineRanges::validate() const {
  auto check = [](double lo, double hi, const char* name) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw ParameterError(std::string("invalid ") + name + " range");
    }
  };
  check(rotation_min, rotation_max, "rotation");
  check(scale_min, scale_max, "scale");
  check(shear_min, shear_max, "shear");
  check(translate_min, translate_max, "translation");
  if (!(scale_min > 0.0)) throw ParameterError("scale range must be strictly positive");
  // |shear_x * shear_y| < 1 keeps every draw invertible.
  if (std::fabs(shear_min) >= 1.0 || std::fabs(shear_max) >= 1.0) {
    throw ParameterError("shear range must lie inside (-1, 1)");
  }
}

AffineParams draw_params(const AffineSampler& sampler, std::uint64_t k, std::int64_t rows,
                         std::int64_t cols) {
  sampler.ranges.validate();
  const AffineRanges& g = sampler.ranges;
  SplitMix64 rng(splitmix64(splitmix64(sampler.seed) ^ k));

  AffineParams p = AffineParams::identity_for(rows, cols);
  p.rotation = rng.uniform(g.rotation_min, g.rotation_max);
  p.scale_x = rng.uniform(g.scale_min, g.scale_max);
  p.scale_y = rng.uniform(g.scale_min, g.scale_max);
  p.shear_x = rng.uniform(g.shear_min, g.shear_max);
  p.shear_y = rng.uniform(g.shear_min, g.shear_max);
  p.translate_r = rng.uniform(g.translate_min, g.translate_max) * static_cast<double>(rows);
  p.translate_c = rng.uniform(g.translate_min, g.translate_max) * static_cast<double>(cols);
  return p;
}

}  // namespace radaug
