#pragma once

#include "rawpipe/image.hpp"
#include "rawpipe/tone.hpp"

#include <filesystem>
#include <optional>

namespace rawpipe {

struct UnsharpParams {
  double amount = 0.0;
  double radius = 1.0;  // Gaussian sigma in pixels
  double threshold = 0.0;
  friend bool operator==(const UnsharpParams&, const UnsharpParams&) = default;
};

struct PostParams {
  double saturation = 1.0;
  ToneCurve tone_curve;
  UnsharpParams unsharp;
  std::optional<int> jpeg_quality;  // nullopt: no JPEG stage
  bool chroma_subsampling = true;   // 4:2:0 when set, 4:4:4 otherwise

  void validate() const;
  friend bool operator==(const PostParams&, const PostParams&) = default;
};

LinearImage adjust_saturation(const LinearImage& img, double s);

/// Clamps to [0,1] and applies the curve.
LinearImage tonemap(const LinearImage& img, const ToneCurve& curve);

LinearImage unsharp_mask(const LinearImage& img, double amount, double radius, double threshold);

struct JpegOptions {
  bool chroma_subsampling = true;
  /// When set, the encoded stream is also written here.
  std::optional<std::filesystem::path> debug_dump;
};

/// Clamp, sRGB-encode, quantize to 8 bit, baseline JPEG encode/decode, linearize.
LinearImage jpeg_roundtrip(const LinearImage& img, int quality, const JpegOptions& opts = {});

/// saturation -> tonemap -> unsharp -> JPEG.
LinearImage run_postprocess(const LinearImage& img, const PostParams& p);

}  // namespace rawpipe
