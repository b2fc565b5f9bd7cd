#include "helpers.hpp"
#include "oracles.hpp"

#include "rawpipe/artifacts.hpp"
#include "rawpipe/demosaic.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/metrics.hpp"

#include <doctest.h>

using namespace rawpipe;

namespace {

constexpr CfaPattern kPatterns[] = {CfaPattern::rggb, CfaPattern::bggr, CfaPattern::grbg, CfaPattern::gbrg};

}  // namespace

TEST_CASE("bilinear matches the same-color-mean oracle") {
  Rng rng(100);
  for (int t = 0; t < 8; ++t) {
    const auto m = oracle::random_mosaic(16, 16, kPatterns[t % 4], rng);
    const auto out = demosaic_bilinear(m);
    for (Index r = 1; r < 15; ++r)
      for (Index c = 1; c < 15; ++c)
        for (int ch = 0; ch < 3; ++ch) REQUIRE(out(r, c, ch) == oracle::bilinear(m, r, c, ch));
  }
}

TEST_CASE("kodak matches the gradient-directed oracle") {
  Rng rng(200);
  for (int t = 0; t < 8; ++t) {
    const auto m = oracle::random_mosaic(16, 16, kPatterns[t % 4], rng);
    const auto out = demosaic_kodak(m);
    for (Index r = 2; r < 14; ++r)
      for (Index c = 2; c < 14; ++c)
        for (int ch = 0; ch < 3; ++ch) REQUIRE(out(r, c, ch) == oracle::kodak(m, r, c, ch));
  }
}

TEST_CASE("defect correction matches the 8-neighbour median oracle") {
  Rng rng(300);
  for (int t = 0; t < 8; ++t) {
    auto m = oracle::random_mosaic(16, 16, kPatterns[t % 4], rng);
    m.data(7, 7) = 1.0f;  // hot pixel
    for (double thr : {0.05, 0.3}) {
      const auto out = correct_defective_pixels(m, thr);
      for (Index r = 2; r < 14; ++r)
        for (Index c = 2; c < 14; ++c) REQUIRE(out.data(r, c) == oracle::defect(m, r, c, thr));
    }
  }
}

TEST_CASE("defect correction removes an isolated hot pixel") {
  BayerMosaic m{PlaneF::Constant(10, 10, 0.2f), CfaPattern::rggb};
  m.data(4, 4) = 0.9f;
  const auto out = correct_defective_pixels(m, 0.1);
  CHECK(out.data(4, 4) == doctest::Approx(0.2f));
  CHECK(correct_defective_pixels(m, std::numeric_limits<double>::infinity()).data.cwiseEqual(m.data).all());
  CHECK_THROWS_AS(correct_defective_pixels(m, 0.0), ValidationError);
}

TEST_CASE("constant scenes are fixed points of every demosaicker") {
  const auto img = LinearImage::Constant(12, 12, 0.3f, 0.5f, 0.7f);
  for (auto pat : kPatterns) {
    const auto m = mosaick(img, pat);
    for (auto method : {DemosaicMethod::bilinear, DemosaicMethod::kodak, DemosaicMethod::ahd}) {
      CHECK(testutil::max_abs_diff(demosaic(m, method), img) < 1e-6);
    }
  }
}

TEST_CASE("sampled values pass through") {
  Rng rng(5);
  const auto m = oracle::random_mosaic(10, 12, CfaPattern::grbg, rng);
  for (auto method : {DemosaicMethod::bilinear, DemosaicMethod::kodak}) {
    const auto out = demosaic(m, method);
    for (Index r = 0; r < 10; ++r)
      for (Index c = 0; c < 12; ++c) CHECK(out(r, c, m.channel_at(r, c)) == m.data(r, c));
  }
}

TEST_CASE("white balance scales sites by their channel gain") {
  Rng rng(6);
  const auto m = oracle::random_mosaic(4, 4, CfaPattern::rggb, rng);
  const auto w = white_balance(m, {2.0, 1.0, 0.5});
  CHECK(w.data(0, 0) == float(m.data(0, 0) * 2.0));
  CHECK(w.data(0, 1) == m.data(0, 1));
  CHECK(w.data(1, 1) == float(m.data(1, 1) * 0.5));
  CHECK_THROWS_AS(white_balance(m, {0.0, 1.0, 1.0}), ValidationError);
  const auto img = testutil::random_image(3, 3, 1);
  const auto wi = white_balance(img, {1.0, 3.0, 1.0});
  CHECK(wi(2, 2, 1) == float(img(2, 2, 1) * 3.0));
  CHECK(wi[0].isApprox(img[0]));
}

TEST_CASE("ahd picks the direction along edges") {
  // Vertical stripes: intensity varies along x only, so interpolation should run vertically.
  LinearImage img(32, 32);
  for (Index r = 0; r < 32; ++r)
    for (Index c = 0; c < 32; ++c) {
      const float v = (c / 3) % 2 ? 0.8f : 0.2f;
      img(r, c, 0) = v;
      img(r, c, 1) = v;
      img(r, c, 2) = v;
    }
  const auto res = demosaic_ahd_detailed(mosaick(img, CfaPattern::rggb));
  int vertical = 0, decided = 0;
  for (Index r = 3; r < 29; ++r)
    for (Index c = 3; c < 29; ++c) {
      if (res.direction(r, c) == std::uint8_t(AhdDirection::tie)) continue;
      ++decided;
      vertical += res.direction(r, c) == std::uint8_t(AhdDirection::vertical);
    }
  REQUIRE(decided > 0);
  CHECK(double(vertical) / decided >= 0.9);
}

TEST_CASE("edge-aware demosaickers beat bilinear on a natural crop") {
  const auto clean = testutil::natural_crop("astronaut.png", 128, 100, 100, 2);
  const auto m = mosaick(clean, CfaPattern::rggb);
  const double bil = psnr(demosaic_bilinear(m), clean).db;
  CHECK(psnr(demosaic_kodak(m), clean).db > bil);
  CHECK(psnr(demosaic_ahd(m), clean).db > bil);
}

TEST_CASE("method names") {
  CHECK(parse_demosaic_method("ahd") == DemosaicMethod::ahd);
  CHECK(to_string(DemosaicMethod::kodak) == "kodak");
  CHECK_THROWS_AS(parse_demosaic_method("vng"), ValidationError);
  BayerMosaic odd{PlaneF::Zero(5, 6), CfaPattern::rggb};
  CHECK_THROWS_AS(demosaic_bilinear(odd), ValidationError);
}
