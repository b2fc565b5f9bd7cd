#include "rawpipe/tone.hpp"

#include "rawpipe/error.hpp"

#include <cmath>
#include <string>

namespace rawpipe {

std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::none: return "none";
    case CurveKind::gamma: return "gamma";
    case CurveKind::s_curve: return "s-curve";
  }
  return "?";
}

CurveKind parse_curve_kind(std::string_view name) {
  for (auto k : {CurveKind::none, CurveKind::gamma, CurveKind::s_curve}) {
    if (name == to_string(k)) return k;
  }
  throw ValidationError("unknown tone curve '" + std::string(name) + "'");
}

void ToneCurve::validate() const {
  switch (kind) {
    case CurveKind::none: return;
    case CurveKind::gamma:
      require(param >= 1.0 && param <= 3.0, "tone curve: gamma must lie in [1, 3]");
      return;
    case CurveKind::s_curve:
      require(param >= 0.0 && param <= 1.0, "tone curve: s-curve strength must lie in [0, 1]");
      return;
  }
}

double ToneCurve::apply(double x) const {
  switch (kind) {
    case CurveKind::none: return x;
    case CurveKind::gamma: {
      const double e = 1.0 / param;
      return x >= 0.0 ? std::pow(x, e) : -std::pow(-x, e);
    }
    case CurveKind::s_curve: {
      const double s = param;
      if (x < 0.0) return (1.0 - s) * x;
      if (x > 1.0) return 1.0 + (1.0 - s) * (x - 1.0);
      return (1.0 - s) * x + s * x * x * (3.0 - 2.0 * x);
    }
  }
  return x;
}

double ToneCurve::invert(double y) const {
  switch (kind) {
    case CurveKind::none: return y;
    case CurveKind::gamma: return y >= 0.0 ? std::pow(y, param) : -std::pow(-y, param);
    case CurveKind::s_curve: {
      const double s = param;
      if (y < 0.0) return s < 1.0 ? y / (1.0 - s) : 0.0;
      if (y > 1.0) return s < 1.0 ? 1.0 + (y - 1.0) / (1.0 - s) : 1.0;
      double lo = 0.0;
      double hi = 1.0;
      for (int i = 0; i < 64; ++i) {
        const double mid = 0.5 * (lo + hi);
        (apply(mid) < y ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return y;
}

LinearImage apply_curve(const LinearImage& img, const ToneCurve& curve) {
  curve.validate();
  if (curve.kind == CurveKind::none) return img;
  return map_planes(img, [&curve](const PlaneF& p) -> PlaneF {
    return p.unaryExpr([&curve](float v) { return static_cast<float>(curve.apply(v)); });
  });
}

LinearImage invert_curve(const LinearImage& img, const ToneCurve& curve) {
  curve.validate();
  if (curve.kind == CurveKind::none) return img;
  return map_planes(img, [&curve](const PlaneF& p) -> PlaneF {
    return p.unaryExpr([&curve](float v) { return static_cast<float>(curve.invert(v)); });
  });
}

}  // namespace rawpipe
