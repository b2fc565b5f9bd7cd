#pragma once

#include "rawpipe/artifacts.hpp"
#include "rawpipe/image.hpp"

#include <cstdint>
#include <string_view>

namespace rawpipe {

enum class DemosaicMethod { bilinear, kodak, ahd };

std::string_view to_string(DemosaicMethod m);
DemosaicMethod parse_demosaic_method(std::string_view name);

struct WhiteBalanceGains {
  double r = 1.0;
  double g = 1.0;
  double b = 1.0;

  friend bool operator==(const WhiteBalanceGains&, const WhiteBalanceGains&) = default;
};

/// Replaces sites deviating from the median of their 8 same-color neighbours by
/// more than `threshold` with that median.
BayerMosaic correct_defective_pixels(const BayerMosaic& m, double threshold);

BayerMosaic white_balance(const BayerMosaic& m, const WhiteBalanceGains& g);
LinearImage white_balance(const LinearImage& img, const WhiteBalanceGains& g);

LinearImage demosaic_bilinear(const BayerMosaic& m);

/// Gradient-directed green (Hibbard) with bilinear color-difference chroma.
LinearImage demosaic_kodak(const BayerMosaic& m);

struct AhdOptions {
  int homogeneity_radius = 1;  // neighbourhood for the smoothed homogeneity sum
  int median_passes = 2;       // color-difference median cleanup passes
};

enum class AhdDirection : std::uint8_t { horizontal = 0, vertical = 1, tie = 2 };

struct AhdResult {
  LinearImage image;
  Plane<std::uint8_t> direction;  // AhdDirection per pixel
};

/// Adaptive homogeneity-directed demosaicking with the per-pixel direction map.
AhdResult demosaic_ahd_detailed(const BayerMosaic& m, const AhdOptions& opts = {});
LinearImage demosaic_ahd(const BayerMosaic& m, const AhdOptions& opts = {});

LinearImage demosaic(const BayerMosaic& m, DemosaicMethod method, const AhdOptions& ahd = {});

}  // namespace rawpipe
