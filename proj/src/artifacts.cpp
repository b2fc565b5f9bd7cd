#include "rawpipe/artifacts.hpp"

#include "rawpipe/error.hpp"
#include "rawpipe/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rawpipe {

void NoiseParams::validate() const {
  require(std::isfinite(gaussian_std) && gaussian_std >= 0.0, "noise: gaussian_std must be >= 0");
  require(std::isfinite(poisson_mult) && poisson_mult >= 0.0, "noise: poisson_mult must be >= 0");
}

void BlurParams::validate() const {
  require(std::isfinite(length) && length >= 0.0, "blur: length must be >= 0");
  require(std::isfinite(angle), "blur: angle must be finite");
}

void AberrationParams::validate() const {
  auto ok = [](double s) { return s >= 0.9 && s <= 1.1; };
  require(ok(red_scale) && ok(blue_scale), "aberration: scales must lie in [0.9, 1.1]");
}

std::string_view to_string(CfaPattern p) {
  switch (p) {
    case CfaPattern::rggb: return "RGGB";
    case CfaPattern::bggr: return "BGGR";
    case CfaPattern::grbg: return "GRBG";
    case CfaPattern::gbrg: return "GBRG";
  }
  return "?";
}

CfaPattern parse_cfa_pattern(std::string_view name) {
  for (CfaPattern p : {CfaPattern::rggb, CfaPattern::bggr, CfaPattern::grbg, CfaPattern::gbrg}) {
    if (name == to_string(p)) return p;
  }
  throw ValidationError("unknown CFA pattern '" + std::string(name) + "'");
}

LinearImage apply_exposure(const LinearImage& img, double gain) {
  require(std::isfinite(gain) && gain > 0.0, "apply_exposure: gain must be > 0");
  const float g = static_cast<float>(gain);
  return map_planes(img, [g](const PlaneF& p) -> PlaneF { return p * g; });
}

PlaneD motion_blur_kernel(const BlurParams& p) {
  p.validate();
  if (p.length <= 1.0) return PlaneD::Ones(1, 1);
  // Sample points spaced <= 1 px apart along the segment, each splatted
  // bilinearly onto the pixel grid.
  const int samples = static_cast<int>(std::ceil(p.length));
  const double half = 0.5 * (p.length - 1.0);
  const double step = (p.length - 1.0) / (samples - 1);
  const double dx = std::cos(p.angle);
  const double dy = -std::sin(p.angle);  // rows grow downwards
  const Index radius = static_cast<Index>(std::ceil(half)) + 1;
  PlaneD k = PlaneD::Zero(2 * radius + 1, 2 * radius + 1);
  for (int s = 0; s < samples; ++s) {
    const double t = -half + s * step;
    const double x = t * dx + static_cast<double>(radius);
    const double y = t * dy + static_cast<double>(radius);
    const double x0 = std::floor(x);
    const double y0 = std::floor(y);
    const double fx = x - x0;
    const double fy = y - y0;
    const auto ix = static_cast<Index>(x0);
    const auto iy = static_cast<Index>(y0);
    k(iy, ix) += (1 - fx) * (1 - fy);
    if (fx > 0) k(iy, ix + 1) += fx * (1 - fy);
    if (fy > 0) k(iy + 1, ix) += (1 - fx) * fy;
    if (fx > 0 && fy > 0) k(iy + 1, ix + 1) += fx * fy;
  }
  return k / k.sum();
}

LinearImage apply_motion_blur(const LinearImage& img, const BlurParams& p) {
  const PlaneD kernel = motion_blur_kernel(p);
  if (kernel.size() == 1) return img;
  return map_planes(img, [&kernel](const PlaneF& plane) { return convolve2d(plane, kernel); });
}

namespace {

float sample_bilinear_clamped(const PlaneF& p, double y, double x) {
  const Index rows = p.rows();
  const Index cols = p.cols();
  const double y0 = std::floor(y);
  const double x0 = std::floor(x);
  const double fy = y - y0;
  const double fx = x - x0;
  auto at = [&](double yy, double xx) {
    const Index r = std::clamp<Index>(static_cast<Index>(yy), 0, rows - 1);
    const Index c = std::clamp<Index>(static_cast<Index>(xx), 0, cols - 1);
    return static_cast<double>(p(r, c));
  };
  double v = (1 - fy) * (1 - fx) * at(y0, x0);
  if (fx > 0) v += (1 - fy) * fx * at(y0, x0 + 1);
  if (fy > 0) v += fy * (1 - fx) * at(y0 + 1, x0);
  if (fx > 0 && fy > 0) v += fy * fx * at(y0 + 1, x0 + 1);
  return static_cast<float>(v);
}

PlaneF radial_rescale(const PlaneF& src, double scale) {
  if (scale == 1.0) return src;
  const double cy = 0.5 * static_cast<double>(src.rows() - 1);
  const double cx = 0.5 * static_cast<double>(src.cols() - 1);
  PlaneF out(src.rows(), src.cols());
  for (Index r = 0; r < src.rows(); ++r) {
    for (Index c = 0; c < src.cols(); ++c) {
      const double sy = cy + (static_cast<double>(r) - cy) / scale;
      const double sx = cx + (static_cast<double>(c) - cx) / scale;
      out(r, c) = sample_bilinear_clamped(src, sy, sx);
    }
  }
  return out;
}

float noisy_value(float x, const NoiseParams& p, Rng& rng) {
  const double v = x;
  if (p.mode == NoiseMode::shot_variance) {
    const double variance = p.gaussian_std * p.gaussian_std + p.poisson_mult * std::max(v, 0.0);
    return static_cast<float>(v + std::sqrt(variance) * rng.normal());
  }
  const double eta = std::sqrt(p.poisson_mult) * rng.normal();
  const double delta = p.gaussian_std * rng.normal();
  return static_cast<float>(v * (1.0 + eta) + delta);
}

void add_noise_plane(PlaneF& plane, const NoiseParams& p, std::uint64_t seed, std::uint64_t plane_key) {
  for (Index r = 0; r < plane.rows(); ++r) {
    Rng rng(derive_seed(seed, {plane_key, static_cast<std::uint64_t>(r)}));
    for (Index c = 0; c < plane.cols(); ++c) plane(r, c) = noisy_value(plane(r, c), p, rng);
  }
}

bool noise_is_identity(const NoiseParams& p) { return p.gaussian_std == 0.0 && p.poisson_mult == 0.0; }

}  // namespace

LinearImage apply_chromatic_aberration(const LinearImage& img, const AberrationParams& p) {
  p.validate();
  return LinearImage(radial_rescale(img[0], p.red_scale), img[1], radial_rescale(img[2], p.blue_scale));
}

LinearImage add_noise(const LinearImage& img, const NoiseParams& p, std::uint64_t seed) {
  p.validate();
  if (noise_is_identity(p)) return img;
  LinearImage out = img;
  for (int c = 0; c < 3; ++c) add_noise_plane(out[c], p, seed, static_cast<std::uint64_t>(c));
  return out;
}

BayerMosaic add_noise(const BayerMosaic& m, const NoiseParams& p, std::uint64_t seed) {
  p.validate();
  if (noise_is_identity(p)) return m;
  BayerMosaic out = m;
  add_noise_plane(out.data, p, seed, 3);
  return out;
}

BayerMosaic mosaick(const LinearImage& img, CfaPattern pattern) {
  require(img.rows() % 2 == 0 && img.cols() % 2 == 0,
          "mosaick: dimensions must be even, got " + std::to_string(img.rows()) + "x" +
              std::to_string(img.cols()));
  BayerMosaic m;
  m.pattern = pattern;
  m.data.resize(img.rows(), img.cols());
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) m.data(r, c) = img(r, c, cfa_channel(pattern, r, c));
  }
  return m;
}

}  // namespace rawpipe

namespace rawpipe {

std::string_view to_string(NoiseMode m) {
  return m == NoiseMode::shot_variance ? "shot-variance" : "literal-multiplicative";
}

NoiseMode parse_noise_mode(std::string_view name) {
  for (auto m : {NoiseMode::shot_variance, NoiseMode::literal_multiplicative}) {
    if (name == to_string(m)) return m;
  }
  throw ValidationError("unknown noise mode '" + std::string(name) + "'");
}

}  // namespace rawpipe
