#include "rawpipe/denoise.hpp"

#include "rawpipe/border.hpp"
#include "rawpipe/color.hpp"
#include "rawpipe/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

namespace rawpipe {

LinearImage pre_tonemap(const LinearImage& img, const ToneCurve& curve) { return apply_curve(img, curve); }

LinearImage bilateral_filter(const LinearImage& img, double sigma_spatial, double sigma_range,
                             int radius) {
  require(sigma_spatial > 0.0, "bilateral_filter: sigma_spatial must be > 0");
  require(sigma_range > 0.0, "bilateral_filter: sigma_range must be > 0");
  require(radius >= 1, "bilateral_filter: radius must be >= 1");
  const Index rows = img.rows();
  const Index cols = img.cols();
  const int width = 2 * radius + 1;
  std::vector<double> spatial(static_cast<std::size_t>(width * width));
  for (int i = -radius; i <= radius; ++i) {
    for (int j = -radius; j <= radius; ++j) {
      spatial[static_cast<std::size_t>((i + radius) * width + j + radius)] =
          std::exp(-0.5 * (i * i + j * j) / (sigma_spatial * sigma_spatial));
    }
  }
  const PlaneD guide = luma(img.cast<double>());
  const double range_scale = -0.5 / (sigma_range * sigma_range);
  LinearImage out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double center = guide(r, c);
      double acc[3] = {0.0, 0.0, 0.0};
      double norm = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const Index rr = reflect_symmetric(r + i, rows);
        for (int j = -radius; j <= radius; ++j) {
          const Index cc = reflect_symmetric(c + j, cols);
          const double d = guide(rr, cc) - center;
          const double w = spatial[static_cast<std::size_t>((i + radius) * width + j + radius)] *
                           std::exp(range_scale * d * d);
          norm += w;
          for (int ch = 0; ch < 3; ++ch) acc[ch] += w * img(rr, cc, ch);
        }
      }
      for (int ch = 0; ch < 3; ++ch) out(r, c, ch) = static_cast<float>(acc[ch] / norm);
    }
  }
  return out;
}

namespace {

PlaneF median_plane(const PlaneF& src, int window) {
  const int half = window / 2;
  const Index rows = src.rows();
  const Index cols = src.cols();
  PlaneF out(rows, cols);
  std::vector<float> values(static_cast<std::size_t>(window * window));
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      std::size_t k = 0;
      for (int i = -half; i <= half; ++i) {
        const Index rr = reflect_symmetric(r + i, rows);
        for (int j = -half; j <= half; ++j) values[k++] = src(rr, reflect_symmetric(c + j, cols));
      }
      std::nth_element(values.begin(), mid, values.end());
      out(r, c) = *mid;
    }
  }
  return out;
}

}  // namespace

LinearImage median_filter(const LinearImage& img, int window, MedianTarget target) {
  require(window >= 1 && window % 2 == 1,
          "median_filter: window must be odd and >= 1, got " + std::to_string(window));
  if (window == 1) return img;
  if (target == MedianTarget::per_channel) {
    return map_planes(img, [window](const PlaneF& p) { return median_plane(p, window); });
  }
  LumaChroma<float> lc = rgb_to_luma_chroma(img);
  lc.luma = median_plane(lc.luma, window);
  return luma_chroma_to_rgb<float, LinearSpace>(lc);
}

// ---------------------------------------------------------------------------
// Haar

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void haar_rows_forward(PlaneD& p, Index h, Index w) {
  std::vector<double> tmp(static_cast<std::size_t>(w));
  for (Index r = 0; r < h; ++r) {
    for (Index k = 0; k < w / 2; ++k) {
      const double a = p(r, 2 * k);
      const double b = p(r, 2 * k + 1);
      tmp[static_cast<std::size_t>(k)] = (a + b) * kInvSqrt2;
      tmp[static_cast<std::size_t>(k + w / 2)] = (a - b) * kInvSqrt2;
    }
    for (Index k = 0; k < w; ++k) p(r, k) = tmp[static_cast<std::size_t>(k)];
  }
}

void haar_rows_inverse(PlaneD& p, Index h, Index w) {
  std::vector<double> tmp(static_cast<std::size_t>(w));
  for (Index r = 0; r < h; ++r) {
    for (Index k = 0; k < w / 2; ++k) {
      const double lo = p(r, k);
      const double hi = p(r, k + w / 2);
      tmp[static_cast<std::size_t>(2 * k)] = (lo + hi) * kInvSqrt2;
      tmp[static_cast<std::size_t>(2 * k + 1)] = (lo - hi) * kInvSqrt2;
    }
    for (Index k = 0; k < w; ++k) p(r, k) = tmp[static_cast<std::size_t>(k)];
  }
}

void check_haar_extent(Index rows, Index cols, int levels) {
  require(levels >= 1, "haar: levels must be >= 1");
  const Index block = Index{1} << levels;
  require(rows % block == 0 && cols % block == 0,
          "haar: extents must be divisible by 2^levels");
}

}  // namespace

PlaneD haar_decompose(const PlaneD& src, int levels) {
  check_haar_extent(src.rows(), src.cols(), levels);
  PlaneD p = src;
  Index h = p.rows();
  Index w = p.cols();
  for (int l = 0; l < levels; ++l) {
    haar_rows_forward(p, h, w);
    PlaneD t = p.topLeftCorner(h, w).transpose();
    haar_rows_forward(t, w, h);
    p.topLeftCorner(h, w) = t.transpose();
    h /= 2;
    w /= 2;
  }
  return p;
}

PlaneD haar_reconstruct(const PlaneD& coeffs, int levels) {
  check_haar_extent(coeffs.rows(), coeffs.cols(), levels);
  PlaneD p = coeffs;
  for (int l = levels - 1; l >= 0; --l) {
    const Index h = p.rows() >> l;
    const Index w = p.cols() >> l;
    PlaneD t = p.topLeftCorner(h, w).transpose();
    haar_rows_inverse(t, w, h);
    p.topLeftCorner(h, w) = t.transpose();
    haar_rows_inverse(p, h, w);
  }
  return p;
}

Plane<bool> haar_detail_mask(Index rows, Index cols, int levels) {
  Plane<bool> mask = Plane<bool>::Constant(rows, cols, true);
  mask.topLeftCorner(rows >> levels, cols >> levels).setConstant(false);
  return mask;
}

LinearImage wavelet_core(const LinearImage& img, double threshold, int levels) {
  require(threshold >= 0.0, "wavelet_core: threshold must be >= 0");
  require(levels >= 1, "wavelet_core: levels must be >= 1");
  const Index block = Index{1} << levels;
  const Index rows = img.rows();
  const Index cols = img.cols();
  const Index prow = (rows + block - 1) / block * block;
  const Index pcol = (cols + block - 1) / block * block;
  const Plane<bool> detail = haar_detail_mask(prow, pcol, levels);
  LinearImage out(rows, cols);
  for (int ch = 0; ch < 3; ++ch) {
    PlaneD padded(prow, pcol);
    for (Index r = 0; r < prow; ++r) {
      for (Index c = 0; c < pcol; ++c) {
        padded(r, c) = img[ch](reflect_symmetric(r, rows), reflect_symmetric(c, cols));
      }
    }
    PlaneD coeffs = haar_decompose(padded, levels);
    for (Index r = 0; r < prow; ++r) {
      for (Index c = 0; c < pcol; ++c) {
        if (!detail(r, c)) continue;
        const double v = coeffs(r, c);
        const double mag = std::abs(v) - threshold;
        coeffs(r, c) = mag > 0.0 ? std::copysign(mag, v) : 0.0;
      }
    }
    const PlaneD rec = haar_reconstruct(coeffs, levels);
    out[ch] = rec.topLeftCorner(rows, cols).cast<float>();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain

void DenoiseChain::validate() const {
  pre_tonemap.validate();
  bool seen[3] = {false, false, false};
  for (const auto& step : steps) {
    const std::size_t idx = step.index();
    require(!seen[idx], "denoise chain: each filter type may appear at most once");
    seen[idx] = true;
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BilateralStep>) {
            require(s.sigma_spatial > 0.0 && s.sigma_range > 0.0, "bilateral: sigmas must be > 0");
            require(s.radius >= 1, "bilateral: radius must be >= 1");
          } else if constexpr (std::is_same_v<T, MedianStep>) {
            require(s.window >= 1 && s.window % 2 == 1, "median: window must be odd and >= 1");
          } else {
            require(s.threshold >= 0.0, "wavelet: threshold must be >= 0");
            require(s.levels >= 1, "wavelet: levels must be >= 1");
          }
        },
        step);
  }
}

LinearImage run_denoise_chain(const LinearImage& img, const DenoiseChain& chain) {
  chain.validate();
  LinearImage cur = pre_tonemap(img, chain.pre_tonemap);
  for (const auto& step : chain.steps) {
    cur = std::visit(
        [&cur](const auto& s) -> LinearImage {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BilateralStep>) {
            return bilateral_filter(cur, s.sigma_spatial, s.sigma_range, s.radius);
          } else if constexpr (std::is_same_v<T, MedianStep>) {
            return median_filter(cur, s.window, s.target);
          } else {
            return wavelet_core(cur, s.threshold, s.levels);
          }
        },
        step);
  }
  if (chain.invert_pre_tonemap_after) cur = invert_curve(cur, chain.pre_tonemap);
  return cur;
}

}  // namespace rawpipe

namespace rawpipe {

std::string_view to_string(MedianTarget t) {
  return t == MedianTarget::per_channel ? "per-channel" : "luma-only";
}

MedianTarget parse_median_target(std::string_view name) {
  for (auto t : {MedianTarget::per_channel, MedianTarget::luma_only}) {
    if (name == to_string(t)) return t;
  }
  throw ValidationError("unknown median target '" + std::string(name) + "'");
}

}  // namespace rawpipe
