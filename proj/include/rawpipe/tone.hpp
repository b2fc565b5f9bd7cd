#pragma once

#include "rawpipe/image.hpp"

#include <string_view>

namespace rawpipe {

enum class CurveKind { none, gamma, s_curve };

std::string_view to_string(CurveKind k);
CurveKind parse_curve_kind(std::string_view name);

/// Pointwise tone curve fixing 0 and 1.
///   gamma:   x^(1/gamma), gamma in [1, 3]
///   s_curve: (1 - s) x + s x^2 (3 - 2x), strength s in [0, 1]
/// Outside [0,1] gamma is extended as an odd function and the s-curve linearly
/// with its endpoint slope, so the map stays monotone on negative noise.
struct ToneCurve {
  CurveKind kind = CurveKind::none;
  double param = 1.0;

  static ToneCurve none() { return {}; }
  static ToneCurve gamma(double g) { return {CurveKind::gamma, g}; }
  static ToneCurve s_curve(double strength) { return {CurveKind::s_curve, strength}; }

  void validate() const;
  [[nodiscard]] double apply(double x) const;
  [[nodiscard]] double invert(double y) const;

  friend bool operator==(const ToneCurve&, const ToneCurve&) = default;
};

LinearImage apply_curve(const LinearImage& img, const ToneCurve& curve);
LinearImage invert_curve(const LinearImage& img, const ToneCurve& curve);

}  // namespace rawpipe
