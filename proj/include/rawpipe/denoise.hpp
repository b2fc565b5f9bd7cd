#pragma once

#include "rawpipe/image.hpp"
#include "rawpipe/tone.hpp"

#include <string_view>
#include <variant>
#include <vector>

namespace rawpipe {

LinearImage pre_tonemap(const LinearImage& img, const ToneCurve& curve);

/// Bilateral filter guided by luma; the same weights are applied to all channels.
LinearImage bilateral_filter(const LinearImage& img, double sigma_spatial, double sigma_range,
                             int radius);

enum class MedianTarget { per_channel, luma_only };

std::string_view to_string(MedianTarget t);
MedianTarget parse_median_target(std::string_view name);

LinearImage median_filter(const LinearImage& img, int window,
                          MedianTarget target = MedianTarget::per_channel);

/// Orthonormal separable Haar pyramid stored in place (Mallat layout): after
/// level k the top-left (rows >> k) x (cols >> k) block holds the approximation.
/// Extents must be divisible by 2^levels.
PlaneD haar_decompose(const PlaneD& src, int levels);
PlaneD haar_reconstruct(const PlaneD& coeffs, int levels);

/// Mask of detail (non-approximation) coefficients for a given pyramid depth.
Plane<bool> haar_detail_mask(Index rows, Index cols, int levels);

/// Haar soft-threshold shrinkage per channel. Inputs are mirror-padded up to a
/// multiple of 2^levels and cropped back afterwards.
LinearImage wavelet_core(const LinearImage& img, double threshold, int levels);

struct BilateralStep {
  double sigma_spatial = 1.0;
  double sigma_range = 0.05;
  int radius = 2;
  friend bool operator==(const BilateralStep&, const BilateralStep&) = default;
};

struct MedianStep {
  int window = 3;
  MedianTarget target = MedianTarget::per_channel;
  friend bool operator==(const MedianStep&, const MedianStep&) = default;
};

struct WaveletStep {
  double threshold = 0.01;
  int levels = 2;
  friend bool operator==(const WaveletStep&, const WaveletStep&) = default;
};

using DenoiseStep = std::variant<BilateralStep, MedianStep, WaveletStep>;

struct DenoiseChain {
  ToneCurve pre_tonemap;
  bool invert_pre_tonemap_after = false;
  std::vector<DenoiseStep> steps;

  void validate() const;
  friend bool operator==(const DenoiseChain&, const DenoiseChain&) = default;
};

LinearImage run_denoise_chain(const LinearImage& img, const DenoiseChain& chain);

}  // namespace rawpipe
