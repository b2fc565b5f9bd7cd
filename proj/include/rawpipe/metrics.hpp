#pragma once

#include "rawpipe/image.hpp"

#include <array>

namespace rawpipe {

/// PSNR in dB; identical inputs are reported through `infinite`, not a number.
struct PsnrValue {
  double db = 0.0;
  bool infinite = false;
};

PsnrValue psnr(const LinearImage& a, const LinearImage& b, double peak = 1.0);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean SSIM over all fully-inside windows of the luma planes.
double ssim(const LinearImage& a, const LinearImage& b, const SsimOptions& opts = {});

inline constexpr double kToneNormalizeEps = 1e-6;

struct ChannelMoments {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};  // population
};

ChannelMoments channel_moments(const LinearImage& img);

/// Affinely remaps each channel of `gt` to the mean and std-dev of `ref`.
LinearImage tone_normalize(const LinearImage& gt, const LinearImage& ref);

/// Pearson correlation of the residual (noisy - clean) with itself shifted
/// `lag` pixels horizontally, pooled over all channels.
double residual_autocorrelation(const LinearImage& noisy, const LinearImage& clean, Index lag);

struct MetricReport {
  PsnrValue psnr;
  double ssim = 0.0;
  ChannelMoments output_moments;
  ChannelMoments reference_moments;
  bool normalized = false;
};

}  // namespace rawpipe
