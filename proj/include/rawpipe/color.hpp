#pragma once

#include "rawpipe/error.hpp"
#include "rawpipe/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rawpipe {

// BT.601 luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

enum class TransferKind { srgb, pure_gamma };

/// Display transfer function. `gamma` is only read for `pure_gamma`.
struct Transfer {
  TransferKind kind = TransferKind::srgb;
  double gamma = 2.2;
};

inline double decode_transfer(double v, const Transfer& t = {}) {
  if (t.kind == TransferKind::pure_gamma) return std::pow(v, t.gamma);
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

inline double encode_transfer(double v, const Transfer& t = {}) {
  if (t.kind == TransferKind::pure_gamma) return std::pow(v, 1.0 / t.gamma);
  return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

/// Gamma-decodes an sRGB raster. Values outside [0,1] are rejected.
template <typename Scalar>
LinearImageT<Scalar> srgb_to_linear(const SrgbImageT<Scalar>& img, const Transfer& t = {}) {
  LinearImageT<Scalar> out(img.rows(), img.cols());
  for (int c = 0; c < 3; ++c) {
    const auto& src = img[c];
    if (!src.allFinite() || (src < Scalar(0)).any() || (src > Scalar(1)).any()) {
      throw ValidationError("srgb_to_linear: channel " + std::to_string(c) +
                            " has values outside [0,1]");
    }
    out[c] = src.unaryExpr(
        [&t](Scalar v) { return static_cast<Scalar>(decode_transfer(static_cast<double>(v), t)); });
  }
  return out;
}

/// Clamps to [0,1], then gamma-encodes.
template <typename Scalar>
SrgbImageT<Scalar> linear_to_srgb(const LinearImageT<Scalar>& img, const Transfer& t = {}) {
  SrgbImageT<Scalar> out(img.rows(), img.cols());
  for (int c = 0; c < 3; ++c) {
    out[c] = img[c].unaryExpr([&t](Scalar v) {
      const double x = std::clamp(static_cast<double>(v), 0.0, 1.0);
      return static_cast<Scalar>(encode_transfer(x, t));
    });
  }
  return out;
}

template <typename Scalar, typename Space>
Plane<Scalar> luma(const Image<Scalar, Space>& img) {
  return Scalar(kLumaR) * img[0] + Scalar(kLumaG) * img[1] + Scalar(kLumaB) * img[2];
}

/// Luma plus the (B - Y, R - Y) color differences.
template <typename Scalar>
struct LumaChroma {
  Plane<Scalar> luma;
  Plane<Scalar> blue_diff;
  Plane<Scalar> red_diff;
};

template <typename Scalar, typename Space>
LumaChroma<Scalar> rgb_to_luma_chroma(const Image<Scalar, Space>& img) {
  Plane<Scalar> y = luma(img);
  Plane<Scalar> cb = img[2] - y;
  Plane<Scalar> cr = img[0] - y;
  return {std::move(y), std::move(cb), std::move(cr)};
}

template <typename Scalar, typename Space = LinearSpace>
Image<Scalar, Space> luma_chroma_to_rgb(const LumaChroma<Scalar>& lc) {
  Plane<Scalar> r = lc.red_diff + lc.luma;
  Plane<Scalar> b = lc.blue_diff + lc.luma;
  Plane<Scalar> g = (lc.luma - Scalar(kLumaR) * r - Scalar(kLumaB) * b) / Scalar(kLumaG);
  return Image<Scalar, Space>(std::move(r), std::move(g), std::move(b));
}

}  // namespace rawpipe
