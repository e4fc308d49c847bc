#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "oracle.hpp"
#include "radaug/errors.hpp"
#include "radaug/io.hpp"
#include "radaug/radial.hpp"
#include "radaug/seed.hpp"
#include "radaug/synth.hpp"

namespace radaug {
namespace {

constexpr double kPi = std::numbers::pi;
const std::filesystem::path kData = RADAUG_TEST_DATA;

TEST(RayAngleTest, Examples) {
  EXPECT_EQ(ray_angle(0, 8), 0.0);
  EXPECT_DOUBLE_EQ(ray_angle(1, 4), kPi / 2);
  EXPECT_DOUBLE_EQ(ray_angle(90, 360), kPi / 2);
  EXPECT_DOUBLE_EQ(ray_angle(3, 4), 3 * kPi / 2);
}

TEST(RayAngleTest, RejectsOutOfRange) {
  EXPECT_THROW(ray_angle(8, 8), ParameterError);
  EXPECT_THROW(ray_angle(-1, 8), ParameterError);
  EXPECT_THROW(ray_angle(0, 0), ParameterError);
}

TEST(RadialOffsetsTest, Examples) {
  EXPECT_EQ(radial_offsets(0, 1.234), (RadialOffset{0, 0}));
  EXPECT_EQ(radial_offsets(3, kPi / 2), (RadialOffset{0, 3}));
  // 5 cos(pi/4) = 3.5355..., 5 sin(pi/4) = 3.5355...
  EXPECT_EQ(radial_offsets(5, kPi / 4), (RadialOffset{4, 4}));
  EXPECT_EQ(radial_offsets(2, kPi), (RadialOffset{-2, 0}));
  EXPECT_THROW(radial_offsets(-1, 0.0), ParameterError);
}

TEST(RadialOffsetsTest, MatchesRoundedPolarFormula) {
  for (std::int64_t r = 0; r < 40; ++r) {
    for (int m = 0; m < 37; ++m) {
      const double theta = 2.0 * kPi * m / 37;
      const RadialOffset o = radial_offsets(r, theta);
      ASSERT_EQ(o.dr, static_cast<std::int64_t>(std::round(r * std::cos(theta))));
      ASSERT_EQ(o.dc, static_cast<std::int64_t>(std::round(r * std::sin(theta))));
    }
  }
}

TEST(RadialTransformTest, ConstantImage) {
  const Image img(8, 8, 7);
  const RadialOutput out = radial_transform(img, Pole{3, 6}, RadialParams{8, 8, FillMode::kClamp});
  EXPECT_EQ(out.image, Image(8, 8, 7));
  EXPECT_EQ(out.pole, (Pole{3, 6}));
}

TEST(RadialTransformTest, AxisAlignedRaysOnFiveByFive) {
  const Image img = synth::coordinate_image(5, 5);  // value = 5r + c
  const Image out = radial_transform(img, Pole{2, 2}, RadialParams{4, 5, FillMode::kZero}).image;
  const auto px = [&](int r, int c) { return static_cast<std::uint8_t>(5 * r + c); };
  // theta = 0 walks down the rows.
  EXPECT_EQ(out(0, 0), px(2, 2));
  EXPECT_EQ(out(0, 1), px(3, 2));
  EXPECT_EQ(out(0, 2), px(4, 2));
  EXPECT_EQ(out(0, 3), 0);
  EXPECT_EQ(out(0, 4), 0);
  // theta = pi walks up.
  EXPECT_EQ(out(2, 0), px(2, 2));
  EXPECT_EQ(out(2, 1), px(1, 2));
  EXPECT_EQ(out(2, 2), px(0, 2));
  EXPECT_EQ(out(2, 3), 0);
  EXPECT_EQ(out(2, 4), 0);
  // theta = pi/2 walks right, 3pi/2 left.
  EXPECT_EQ(out(1, 2), px(2, 4));
  EXPECT_EQ(out(3, 2), px(2, 0));
}

TEST(RadialTransformTest, GoldenSixteenBySixteen) {
  const Image src = read_image(kData / "radial_src_16x16.pgm");
  ASSERT_EQ(src, synth::random_image(16, 16, 1601));
  const Image golden = read_image(kData / "radial_golden_16x16_pole5_9.pgm");
  const RadialOutput out = radial_transform(src, Pole{5, 9}, RadialParams{16, 16, FillMode::kZero});
  EXPECT_EQ(out.image, golden);
}

TEST(RadialTransformTest, Errors) {
  const Image img(4, 4);
  EXPECT_THROW(radial_transform(img, Pole{4, 0}, RadialParams{4, 4}), ParameterError);
  EXPECT_THROW(radial_transform(img, Pole{0, -1}, RadialParams{4, 4}), ParameterError);
  EXPECT_THROW(radial_transform(img, Pole{0, 0}, RadialParams{0, 4}), ParameterError);
  EXPECT_THROW(radial_transform(img, Pole{0, 0}, RadialParams{4, 0}), ParameterError);
}

TEST(RadialTransformTest, DefaultGridFollowsSource) {
  const Image img(6, 11);
  EXPECT_EQ(RadialParams::for_image(img), (RadialParams{6, 11, FillMode::kZero}));
  EXPECT_EQ(diagonal_radii(img), 13);  // hypot(6, 11) = 12.53
  EXPECT_EQ(diagonal_radii(Image(3, 4)), 5);
}

// Properties over seeded random cases.
struct Case {
  Image img;
  Pole pole;
  RadialParams params;
};

Case random_case(std::uint64_t seed, std::int64_t max_side = 40) {
  SplitMix64 rng(seed);
  const auto rows = static_cast<std::int64_t>(1 + rng.below(static_cast<std::uint64_t>(max_side)));
  const auto cols = static_cast<std::int64_t>(1 + rng.below(static_cast<std::uint64_t>(max_side)));
  Case c{synth::random_image(rows, cols, rng()), pick_pole(rng(), rows, cols), {}};
  c.params.rays = static_cast<std::int64_t>(1 + rng.below(64));
  c.params.radii = static_cast<std::int64_t>(1 + rng.below(64));
  c.params.fill = rng.below(2) ? FillMode::kClamp : FillMode::kZero;
  return c;
}

TEST(RadialPropertyTest, MatchesOracle) {
  for (std::uint64_t s = 0; s < 150; ++s) {
    const Case c = random_case(s);
    const Image fast = radial_transform(c.img, c.pole, c.params).image;
    const Image slow =
        oracle::radial(c.img, c.pole.u, c.pole.v, c.params.rays, c.params.radii, c.params.fill);
    ASSERT_EQ(fast, slow) << "case " << s;
  }
}

TEST(RadialPropertyTest, PoleColumnIsConstant) {
  for (std::uint64_t s = 1000; s < 1200; ++s) {
    const Case c = random_case(s);
    const Image out = radial_transform(c.img, c.pole, c.params).image;
    for (std::int64_t m = 0; m < out.rows(); ++m) {
      ASSERT_EQ(out(m, 0), c.img(c.pole.u, c.pole.v));
    }
  }
}

TEST(RadialPropertyTest, ZeroFillValuesComeFromSource) {
  for (std::uint64_t s = 2000; s < 2100; ++s) {
    Case c = random_case(s);
    c.params.fill = FillMode::kZero;
    const std::set<std::uint8_t> values(c.img.pixels().begin(), c.img.pixels().end());
    const Image out = radial_transform(c.img, c.pole, c.params).image;
    for (std::uint8_t v : out.pixels()) ASSERT_TRUE(v == 0 || values.count(v));
  }
}

TEST(RadialPropertyTest, AxisRaysAreScanlines) {
  for (std::uint64_t s = 3000; s < 3100; ++s) {
    Case c = random_case(s);
    c.params.rays = 4 * (1 + static_cast<std::int64_t>(s % 16));
    const Image out = radial_transform(c.img, c.pole, c.params).image;
    const std::int64_t q = c.params.rays / 4;
    const std::int64_t u = c.pole.u;
    const std::int64_t v = c.pole.v;
    for (std::int64_t r = 0; r < c.params.radii; ++r) {
      ASSERT_EQ(out(0, r), resolve_sample(c.img, u + r, v, c.params.fill));
      ASSERT_EQ(out(q, r), resolve_sample(c.img, u, v + r, c.params.fill));
      ASSERT_EQ(out(2 * q, r), resolve_sample(c.img, u - r, v, c.params.fill));
      ASSERT_EQ(out(3 * q, r), resolve_sample(c.img, u, v - r, c.params.fill));
    }
  }
}

TEST(RadialPropertyTest, Deterministic) {
  for (std::uint64_t s = 4000; s < 4020; ++s) {
    const Case c = random_case(s);
    EXPECT_EQ(radial_transform(c.img, c.pole, c.params).image,
              radial_transform(c.img, c.pole, c.params).image);
  }
}

TEST(RadialPropertyTest, NearPoleUpsampling) {
  // Distinct source cells reached by radii 0..k grow monotonically and never
  // exceed the number of (ray, radius) cells; near the pole they duplicate.
  const RadialKernel kernel(RadialParams{64, 32, FillMode::kZero});
  std::set<std::pair<std::int64_t, std::int64_t>> reached;
  std::size_t previous = 0;
  for (std::int64_t k = 0; k < 32; ++k) {
    for (std::int64_t m = 0; m < 64; ++m) {
      const RadialOffset o = kernel.ray(m)[static_cast<std::size_t>(k)];
      reached.emplace(o.dr, o.dc);
    }
    ASSERT_GE(reached.size(), previous);
    ASSERT_LE(reached.size(), static_cast<std::size_t>(64 * (k + 1)));
    previous = reached.size();
    if (k <= 4) {
      EXPECT_LT(reached.size(), static_cast<std::size_t>(64 * (k + 1))) << "k=" << k;
    }
  }
  // Radius 0 collapses all 64 rays onto the pole.
  std::set<std::pair<std::int64_t, std::int64_t>> r0;
  for (std::int64_t m = 0; m < 64; ++m) r0.emplace(kernel.ray(m)[0].dr, kernel.ray(m)[0].dc);
  EXPECT_EQ(r0.size(), 1u);
}

TEST(RadialBatchTest, MatchesSingleCallsForAnyWorkerCount) {
  const Image img = synth::random_image(24, 31, 5);
  std::vector<Pole> poles;
  for (std::uint64_t i = 0; i < 50; ++i) poles.push_back(pick_pole(i, 24, 31));
  const RadialParams params{24, 31, FillMode::kClamp};
  const auto serial = radial_transform_batch(img, poles, params, 1);
  const auto threaded = radial_transform_batch(img, poles, params, 4);
  ASSERT_EQ(serial.size(), poles.size());
  for (std::size_t i = 0; i < poles.size(); ++i) {
    EXPECT_EQ(serial[i], radial_transform(img, poles[i], params).image);
    EXPECT_EQ(threaded[i], serial[i]);
  }
  std::vector<Pole> bad = poles;
  bad.push_back(Pole{24, 0});
  EXPECT_THROW(radial_transform_batch(img, bad, params, 2), ParameterError);
}

TEST(PoleEnumeratorTest, ConstantImageHasOneDistinctOutput) {
  const auto outs = enumerate_pole_transforms(Image(8, 8, 200), RadialParams{8, 8, FillMode::kClamp});
  ASSERT_EQ(outs.size(), 64u);
  for (std::size_t i = 0; i < outs.size(); ++i) {
    EXPECT_EQ(outs[i].image, outs[0].image);
    EXPECT_EQ(outs[i].pole, (Pole{static_cast<std::int64_t>(i / 8), static_cast<std::int64_t>(i % 8)}));
  }
}

TEST(PoleEnumeratorTest, SeededEightByEightDistinctCount) {
  const Image img = synth::random_image(8, 8, 88);
  std::set<std::vector<std::uint8_t>> distinct;
  PoleEnumerator e(img, RadialParams{8, 8, FillMode::kZero});
  Image buf(8, 8);
  Pole pole;
  while (e.next_into(buf, pole)) distinct.emplace(buf.pixels().begin(), buf.pixels().end());
  // Frozen from the brute-force oracle (tests/make_goldens).
  EXPECT_EQ(distinct.size(), 64u);
  EXPECT_EQ(distinct.size(), oracle::distinct_pole_outputs(img, 8, 8, FillMode::kZero));
}

TEST(PoleEnumeratorTest, CountsEveryPixel) {
  const Image img(256, 256);
  PoleEnumerator e(img, RadialParams::for_image(img));
  EXPECT_EQ(e.count(), 65536u);
  const Image tall(3, 5);
  PoleEnumerator small(tall, RadialParams{2, 2});
  std::uint64_t n = 0;
  while (small.next()) ++n;
  EXPECT_EQ(n, 15u);
  EXPECT_FALSE(small.next().has_value());
}

}  // namespace
}  // namespace radaug
