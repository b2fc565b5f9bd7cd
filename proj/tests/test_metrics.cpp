#include "helpers.hpp"
#include "oracles.hpp"

#include "rawpipe/error.hpp"
#include "rawpipe/filters.hpp"
#include "rawpipe/metrics.hpp"

#include <doctest.h>

using namespace rawpipe;
using testutil::random_image;

TEST_CASE("psnr analytic values") {
  const auto a = LinearImage::Constant(10, 10, 0.5f);
  CHECK(psnr(a, a).infinite);
  const auto b = LinearImage::Constant(10, 10, 0.6f);  // MSE 0.01, up to float rounding
  const double mse = std::pow(double(0.6f) - double(0.5f), 2);
  CHECK(psnr(a, b).db == doctest::Approx(10 * std::log10(1.0 / mse)).epsilon(1e-12));
  CHECK(psnr(a, b).db == doctest::Approx(20.0).epsilon(1e-6));
  CHECK(psnr(a, b, 255.0).db == doctest::Approx(20.0 + 20 * std::log10(255.0)).epsilon(1e-6));
  // Exact MSE 0.01: 64 of 100 samples off by 1/8.
  auto c = a;
  for (int ch = 0; ch < 3; ++ch)
    for (Index i = 0; i < 64; ++i) c[ch](i / 10, i % 10) += 0.125f;
  CHECK(psnr(a, c).db == 20.0);
  CHECK_THROWS_AS(psnr(a, LinearImage(10, 11)), ValidationError);
  CHECK_THROWS_AS(psnr(a, b, 0.0), ValidationError);
}

TEST_CASE("psnr of uniform noise") {
  const auto a = LinearImage::Constant(400, 400, 0.5f);
  const auto noise = random_image(400, 400, 9, -0.05, 0.05);
  LinearImage b(400, 400);
  for (int ch = 0; ch < 3; ++ch) b[ch] = a[ch] + noise[ch];
  CHECK(psnr(a, b).db == doctest::Approx(30.79).epsilon(0.05 / 30.79));
  CHECK(psnr(a, b).db == psnr(b, a).db);
}

TEST_CASE("ssim matches the per-window oracle") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = random_image(32, 32, 10 + s);
    const auto b = random_image(32, 32, 20 + s);
    CHECK(std::abs(ssim(a, b) - oracle::ssim(a, b)) < 1e-6);
    const auto bb = gaussian_blur(a, 1.0);
    CHECK(std::abs(ssim(a, bb) - oracle::ssim(a, bb)) < 1e-6);
    CHECK(std::abs(ssim(a, b) - ssim(b, a)) < 1e-9);
  }
}

TEST_CASE("ssim special cases") {
  const auto a = random_image(20, 20, 1);
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-9));
  const float ma = 0.3f, mb = 0.4f;
  const auto ca = LinearImage::Constant(16, 16, ma);
  const auto cb = LinearImage::Constant(16, 16, mb);
  const double ya = 0.299 * ma + 0.587 * ma + 0.114 * ma;
  const double yb = 0.299 * mb + 0.587 * mb + 0.114 * mb;
  const double C1 = 1e-4;
  CHECK(ssim(ca, cb) == doctest::Approx((2 * ya * yb + C1) / (ya * ya + yb * yb + C1)).epsilon(1e-9));
  CHECK_THROWS_AS(ssim(LinearImage(8, 8), LinearImage(8, 8)), ValidationError);
}

TEST_CASE("tone normalization") {
  const auto ref = random_image(30, 30, 2);
  const auto gt = random_image(30, 30, 3, 0.2, 0.5);
  const auto out = tone_normalize(gt, ref);
  const auto mo = channel_moments(out), mr = channel_moments(ref);
  for (int ch = 0; ch < 3; ++ch) {
    CHECK(std::abs(mo.mean[ch] - mr.mean[ch]) < 1e-6);
    CHECK(std::abs(mo.stddev[ch] - mr.stddev[ch]) < 1e-6);
  }
  CHECK(testutil::max_abs_diff(tone_normalize(out, ref), out) < 1e-6);  // idempotent
  LinearImage affine(30, 30);
  for (int ch = 0; ch < 3; ++ch) affine[ch] = 2.0f * ref[ch] + 0.1f;
  CHECK(testutil::max_abs_diff(tone_normalize(affine, ref), ref) < 1e-5);
  CHECK(testutil::max_abs_diff(tone_normalize(ref, ref), ref) < 1e-6);

  auto flat = gt;
  flat[1].setConstant(0.5f);
  try {
    (void)tone_normalize(flat, ref);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("channel G") != std::string::npos);
  }
}

TEST_CASE("residual autocorrelation") {
  const auto clean = LinearImage::Constant(600, 600, 0.5f);
  LinearImage noisy(600, 600);
  Rng rng(4);
  for (int ch = 0; ch < 3; ++ch)
    for (Index r = 0; r < 600; ++r)
      for (Index c = 0; c < 600; ++c) noisy[ch](r, c) = float(0.5 + 0.05 * rng.normal());
  CHECK(residual_autocorrelation(noisy, clean, 0) == 1.0);
  CHECK(std::abs(residual_autocorrelation(noisy, clean, 1)) < 0.005);

  // 3-tap horizontal box filter: lag-1 correlation 2/3.
  LinearImage boxed(600, 600);
  for (int ch = 0; ch < 3; ++ch)
    for (Index r = 0; r < 600; ++r)
      for (Index c = 0; c < 600; ++c) {
        const auto at = [&](Index j) { return noisy[ch](r, std::clamp<Index>(j, 0, 599)) - 0.5f; };
        boxed[ch](r, c) = 0.5f + (at(c - 1) + at(c) + at(c + 1)) / 3.0f;
      }
  CHECK(residual_autocorrelation(boxed, clean, 1) == doctest::Approx(2.0 / 3.0).epsilon(0.015));

  // Invariant to affine rescaling of the residual.
  LinearImage scaled(600, 600);
  for (int ch = 0; ch < 3; ++ch) scaled[ch] = 0.5f + 3.0f * (boxed[ch] - 0.5f) + 0.01f;
  CHECK(residual_autocorrelation(scaled, clean, 1) ==
        doctest::Approx(residual_autocorrelation(boxed, clean, 1)).epsilon(1e-4));
  CHECK_THROWS_AS(residual_autocorrelation(clean, clean, 1), ValidationError);
  CHECK_THROWS_AS(residual_autocorrelation(noisy, clean, -1), ValidationError);
}
