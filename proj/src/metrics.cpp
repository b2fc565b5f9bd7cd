#include "rawpipe/metrics.hpp"

#include "rawpipe/color.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/filters.hpp"

#include <cmath>
#include <string>

namespace rawpipe {

namespace {

void require_same_shape(const LinearImage& a, const LinearImage& b, const char* what) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          std::string(what) + ": image shapes differ (" + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
}

PlaneD luma_d(const LinearImage& img) {
  PlaneD y(img.rows(), img.cols());
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      y(r, c) = kLumaR * double(img[0](r, c)) + kLumaG * double(img[1](r, c)) + kLumaB * double(img[2](r, c));
    }
  }
  return y;
}

// Valid-region separable filtering: output is (rows - w + 1) x (cols - w + 1).
PlaneD filter_valid(const PlaneD& p, const Eigen::ArrayXd& taps) {
  const Index w = Index(taps.size());
  const Index orow = p.rows() - w + 1;
  const Index ocol = p.cols() - w + 1;
  PlaneD tmp(p.rows(), ocol);
  for (Index r = 0; r < p.rows(); ++r) {
    for (Index c = 0; c < ocol; ++c) {
      double s = 0.0;
      for (Index k = 0; k < w; ++k) s += taps[k] * p(r, c + k);
      tmp(r, c) = s;
    }
  }
  PlaneD out(orow, ocol);
  for (Index r = 0; r < orow; ++r) {
    for (Index c = 0; c < ocol; ++c) {
      double s = 0.0;
      for (Index k = 0; k < w; ++k) s += taps[k] * tmp(r + k, c);
      out(r, c) = s;
    }
  }
  return out;
}

}  // namespace

PsnrValue psnr(const LinearImage& a, const LinearImage& b, double peak) {
  require_same_shape(a, b, "psnr");
  require(peak > 0.0 && std::isfinite(peak), "psnr: peak must be positive");
  require(!a.empty(), "psnr: empty image");
  double sum = 0.0;
  for (int ch = 0; ch < 3; ++ch) {
    sum += (a[ch].cast<double>() - b[ch].cast<double>()).square().sum();
  }
  const double mse = sum / (3.0 * double(a.rows()) * double(a.cols()));
  if (mse == 0.0) return {0.0, true};
  return {10.0 * std::log10(peak * peak / mse), false};
}

double ssim(const LinearImage& a, const LinearImage& b, const SsimOptions& opts) {
  require_same_shape(a, b, "ssim");
  require(opts.window >= 1 && opts.window % 2 == 1, "ssim: window must be odd and positive");
  require(opts.sigma > 0.0, "ssim: sigma must be positive");
  require(a.rows() >= opts.window && a.cols() >= opts.window, "ssim: image smaller than the window");

  const auto taps = gaussian_taps(opts.sigma, opts.window / 2);
  const PlaneD x = luma_d(a);
  const PlaneD y = luma_d(b);
  const PlaneD mx = filter_valid(x, taps);
  const PlaneD my = filter_valid(y, taps);
  const PlaneD xx = filter_valid((x * x).eval(), taps);
  const PlaneD yy = filter_valid((y * y).eval(), taps);
  const PlaneD xy = filter_valid((x * y).eval(), taps);

  const double c1 = (opts.k1 * opts.dynamic_range) * (opts.k1 * opts.dynamic_range);
  const double c2 = (opts.k2 * opts.dynamic_range) * (opts.k2 * opts.dynamic_range);
  const PlaneD vx = xx - mx * mx;
  const PlaneD vy = yy - my * my;
  const PlaneD cxy = xy - mx * my;
  const PlaneD map = ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
  return map.mean();
}

ChannelMoments channel_moments(const LinearImage& img) {
  require(!img.empty(), "channel_moments: empty image");
  ChannelMoments m;
  const double n = double(img.rows()) * double(img.cols());
  for (int ch = 0; ch < 3; ++ch) {
    const PlaneD p = img[ch].cast<double>();
    const double mean = p.sum() / n;
    const double var = (p - mean).square().sum() / n;
    m.mean[ch] = mean;
    m.stddev[ch] = std::sqrt(var);
  }
  return m;
}

LinearImage tone_normalize(const LinearImage& gt, const LinearImage& ref) {
  require_same_shape(gt, ref, "tone_normalize");
  const ChannelMoments g = channel_moments(gt);
  const ChannelMoments t = channel_moments(ref);
  LinearImage out(gt.rows(), gt.cols());
  static constexpr const char* kNames[3] = {"R", "G", "B"};
  for (int ch = 0; ch < 3; ++ch) {
    require(g.stddev[ch] > kToneNormalizeEps,
            std::string("tone_normalize: channel ") + kNames[ch] + " of the ground truth is constant");
    const double scale = t.stddev[ch] / g.stddev[ch];
    out[ch] = ((gt[ch].cast<double>() - g.mean[ch]) * scale + t.mean[ch]).cast<float>();
  }
  return out;
}

double residual_autocorrelation(const LinearImage& noisy, const LinearImage& clean, Index lag) {
  require_same_shape(noisy, clean, "residual_autocorrelation");
  require(lag >= 0, "residual_autocorrelation: lag must be non-negative");
  require(lag < noisy.cols(), "residual_autocorrelation: lag exceeds image width");
  const Index n = noisy.cols() - lag;
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  double count = 0.0;
  for (int ch = 0; ch < 3; ++ch) {
    const PlaneD res = noisy[ch].cast<double>() - clean[ch].cast<double>();
    for (Index r = 0; r < res.rows(); ++r) {
      for (Index c = 0; c < n; ++c) {
        const double u = res(r, c);
        const double v = res(r, c + lag);
        sx += u;
        sy += v;
        sxx += u * u;
        syy += v * v;
        sxy += u * v;
        count += 1.0;
      }
    }
  }
  const double vx = sxx - sx * sx / count;
  const double vy = syy - sy * sy / count;
  require(vx > 0.0 && vy > 0.0, "residual_autocorrelation: residual has zero variance");
  if (lag == 0) return 1.0;
  return (sxy - sx * sy / count) / std::sqrt(vx * vy);
}

}  // namespace rawpipe
