#pragma once

#include "rawpipe/image.hpp"
#include "rawpipe/rng.hpp"

#include <string_view>

namespace rawpipe {

enum class NoiseMode {
  shot_variance,          // y = x + N(0, std^2 + mult * max(x, 0))
  literal_multiplicative  // y = x (1 + N(0, mult)) + N(0, std^2)
};

std::string_view to_string(NoiseMode m);
NoiseMode parse_noise_mode(std::string_view name);

/// Read noise and shot-noise strength on the [0,1] intensity scale.
struct NoiseParams {
  double gaussian_std = 0.0;
  double poisson_mult = 0.0;
  NoiseMode mode = NoiseMode::shot_variance;

  void validate() const;
  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

struct BlurParams {
  double length = 0.0;  // pixels
  double angle = 0.0;   // radians, counter-clockwise from +x

  void validate() const;
  friend bool operator==(const BlurParams&, const BlurParams&) = default;
};

/// Radial magnification of R and B relative to G.
struct AberrationParams {
  double red_scale = 1.0;
  double blue_scale = 1.0;

  void validate() const;
  friend bool operator==(const AberrationParams&, const AberrationParams&) = default;
};

enum class CfaPattern { rggb, bggr, grbg, gbrg };

std::string_view to_string(CfaPattern p);
CfaPattern parse_cfa_pattern(std::string_view name);

/// Channel index (0 = R, 1 = G, 2 = B) sampled at (row, col).
constexpr int cfa_channel(CfaPattern p, Index row, Index col) {
  const int site = static_cast<int>((row & 1) * 2 + (col & 1));
  constexpr int kTable[4][4] = {{0, 1, 1, 2}, {2, 1, 1, 0}, {1, 0, 2, 1}, {1, 2, 0, 1}};
  return kTable[static_cast<int>(p)][site];
}

/// Single-plane color-filter-array raster.
struct BayerMosaic {
  PlaneF data;
  CfaPattern pattern = CfaPattern::rggb;

  [[nodiscard]] Index rows() const { return data.rows(); }
  [[nodiscard]] Index cols() const { return data.cols(); }
  [[nodiscard]] int channel_at(Index r, Index c) const { return cfa_channel(pattern, r, c); }
};

LinearImage apply_exposure(const LinearImage& img, double gain);

/// Normalized line point-spread function, odd-sized and centered.
PlaneD motion_blur_kernel(const BlurParams& p);

LinearImage apply_motion_blur(const LinearImage& img, const BlurParams& p);

LinearImage apply_chromatic_aberration(const LinearImage& img, const AberrationParams& p);

/// Per-row substreams are derived from `seed`, so rows may be drawn in parallel.
LinearImage add_noise(const LinearImage& img, const NoiseParams& p, std::uint64_t seed);
BayerMosaic add_noise(const BayerMosaic& m, const NoiseParams& p, std::uint64_t seed);

BayerMosaic mosaick(const LinearImage& img, CfaPattern pattern);

}  // namespace rawpipe
