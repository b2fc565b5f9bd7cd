#include "helpers.hpp"

#include "rawpipe/artifacts.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/metrics.hpp"

#include <doctest.h>

#include <numbers>

using namespace rawpipe;
using testutil::random_image;

TEST_CASE("exposure scales linearly") {
  const auto img = random_image(8, 8, 1);
  const auto out = apply_exposure(img, 2.0);
  CHECK(out(3, 4, 1) == doctest::Approx(2.0 * img(3, 4, 1)));
  CHECK(apply_exposure(img, 1.0) == img);
  CHECK_THROWS_AS(apply_exposure(img, 0.0), ValidationError);
}

TEST_CASE("motion blur kernel") {
  CHECK(motion_blur_kernel({0.0, 0.0}).size() == 1);
  for (double len : {1.5, 3.0, 5.0, 7.3}) {
    for (double ang : {0.0, 0.4, std::numbers::pi / 2, 2.0}) {
      const auto k = motion_blur_kernel({len, ang});
      CHECK(k.rows() % 2 == 1);
      CHECK(k.rows() == k.cols());
      CHECK(k.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(k.minCoeff() >= 0.0);
      // Centred: first moments vanish.
      const Index R = k.rows() / 2;
      double mx = 0, my = 0;
      for (Index r = 0; r < k.rows(); ++r)
        for (Index c = 0; c < k.cols(); ++c) {
          mx += k(r, c) * double(c - R);
          my += k(r, c) * double(r - R);
        }
      CHECK(std::abs(mx) < 1e-12);
      CHECK(std::abs(my) < 1e-12);
    }
  }
  // Horizontal blur spreads along a row only.
  const auto h = motion_blur_kernel({5.0, 0.0});
  const Index R = h.rows() / 2;
  CHECK(h.row(R).sum() == doctest::Approx(1.0));
  CHECK_THROWS_AS(motion_blur_kernel({-1.0, 0.0}), ValidationError);
}

TEST_CASE("blur and aberration keep constants and unit parameters") {
  const auto k = LinearImage::Constant(20, 24, 0.3f, 0.5f, 0.7f);
  CHECK(testutil::max_abs_diff(apply_motion_blur(k, {4.0, 0.7}), k) < 1e-6);
  CHECK(testutil::max_abs_diff(apply_chromatic_aberration(k, {1.002, 0.998}), k) < 1e-6);
  const auto img = random_image(20, 24, 2);
  CHECK(apply_chromatic_aberration(img, {1.0, 1.0}) == img);
  CHECK(apply_motion_blur(img, {0.0, 0.0}) == img);
  const auto ab = apply_chromatic_aberration(img, {1.01, 1.0});
  CHECK(ab[1].isApprox(img[1]));
  CHECK(ab[2].isApprox(img[2]));
  CHECK(!ab[0].isApprox(img[0]));
}

TEST_CASE("shot-variance noise statistics") {
  const NoiseParams p{0.05, 0.1, NoiseMode::shot_variance};
  const auto x = LinearImage::Constant(200, 200, 0.4f);
  const auto y = add_noise(x, p, 9);
  const double expect_var = 0.05 * 0.05 + 0.1 * 0.4;
  double s = 0, s2 = 0;
  const double n = 3.0 * 200 * 200;
  for (int ch = 0; ch < 3; ++ch) {
    const PlaneD d = y[ch].cast<double>() - 0.4;
    s += d.sum();
    s2 += d.square().sum();
  }
  CHECK(std::abs(s / n) < 0.003);
  CHECK(s2 / n == doctest::Approx(expect_var).epsilon(0.03));
}

TEST_CASE("literal multiplicative noise agrees at unit intensity") {
  const auto one = LinearImage::Constant(200, 200, 1.0f);
  const NoiseParams lit{0.02, 0.01, NoiseMode::literal_multiplicative};
  const auto y = add_noise(one, lit, 5);
  double s2 = 0;
  for (int ch = 0; ch < 3; ++ch) s2 += (y[ch].cast<double>() - 1.0).square().sum();
  CHECK(s2 / (3.0 * 40000) == doctest::Approx(0.02 * 0.02 + 0.01).epsilon(0.03));
  // Zero input: only the additive term survives.
  const auto z = add_noise(LinearImage(100, 100), lit, 6);
  double z2 = 0;
  for (int ch = 0; ch < 3; ++ch) z2 += z[ch].cast<double>().square().sum();
  CHECK(z2 / 30000.0 == doctest::Approx(0.0004).epsilon(0.05));
}

TEST_CASE("noise is seeded, zero-parameter noise is identity") {
  const auto img = random_image(16, 16, 3);
  const NoiseParams p{0.01, 0.01};
  CHECK(add_noise(img, p, 1) == add_noise(img, p, 1));
  CHECK(!(add_noise(img, p, 1) == add_noise(img, p, 2)));
  CHECK(add_noise(img, NoiseParams{}, 1) == img);
  CHECK_THROWS_AS(add_noise(img, NoiseParams{-0.1, 0.0}, 1), ValidationError);
  // Residual is white.
  const auto flat = LinearImage::Constant(256, 256, 0.5f);
  const auto noisy = add_noise(flat, {0.02, 0.0}, 3);
  CHECK(std::abs(residual_autocorrelation(noisy, flat, 1)) < 0.02);
}

TEST_CASE("mosaick samples one channel per site") {
  const auto img = random_image(6, 8, 4);
  for (auto pat : {CfaPattern::rggb, CfaPattern::bggr, CfaPattern::grbg, CfaPattern::gbrg}) {
    const auto m = mosaick(img, pat);
    CHECK(m.pattern == pat);
    int counts[3] = {0, 0, 0};
    for (Index r = 0; r < 6; ++r)
      for (Index c = 0; c < 8; ++c) {
        const int ch = m.channel_at(r, c);
        CHECK(m.data(r, c) == img(r, c, ch));
        if (r < 2 && c < 2) counts[ch]++;
      }
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 1);
  }
  CHECK(cfa_channel(CfaPattern::rggb, 0, 0) == 0);
  CHECK(cfa_channel(CfaPattern::bggr, 1, 1) == 0);
  CHECK(cfa_channel(CfaPattern::grbg, 0, 1) == 0);
  CHECK(cfa_channel(CfaPattern::gbrg, 1, 0) == 0);
  CHECK(parse_cfa_pattern(to_string(CfaPattern::gbrg)) == CfaPattern::gbrg);
  CHECK_THROWS_AS(mosaick(random_image(5, 8, 1), CfaPattern::rggb), ValidationError);
  CHECK_THROWS_AS(parse_cfa_pattern("XYZW"), ValidationError);
}
