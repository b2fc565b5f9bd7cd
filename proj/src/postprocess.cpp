#include "rawpipe/postprocess.hpp"

#include "rawpipe/color.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/filters.hpp"
#include "rawpipe/io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rawpipe {

void PostParams::validate() const {
  require(std::isfinite(saturation) && saturation >= 0.0, "post: saturation must be >= 0");
  tone_curve.validate();
  require(unsharp.amount >= 0.0, "post: unsharp amount must be >= 0");
  require(unsharp.radius > 0.0, "post: unsharp radius must be > 0");
  require(unsharp.threshold >= 0.0, "post: unsharp threshold must be >= 0");
  if (jpeg_quality) {
    require(*jpeg_quality >= 1 && *jpeg_quality <= 100, "post: jpeg quality must be in [1, 100]");
  }
}

LinearImage adjust_saturation(const LinearImage& img, double s) {
  require(std::isfinite(s) && s >= 0.0, "adjust_saturation: s must be >= 0");
  if (s == 1.0) return img;
  const PlaneD y = luma(img.cast<double>());
  return map_planes(img, [&](const PlaneF& p) -> PlaneF {
    return (y + s * (p.cast<double>() - y)).cast<float>();
  });
}

LinearImage tonemap(const LinearImage& img, const ToneCurve& curve) {
  curve.validate();
  return map_planes(img, [&curve](const PlaneF& p) -> PlaneF {
    return p.unaryExpr([&curve](float v) {
      return static_cast<float>(curve.apply(std::clamp(static_cast<double>(v), 0.0, 1.0)));
    });
  });
}

LinearImage unsharp_mask(const LinearImage& img, double amount, double radius, double threshold) {
  require(amount >= 0.0, "unsharp_mask: amount must be >= 0");
  require(radius > 0.0, "unsharp_mask: radius must be > 0");
  require(threshold >= 0.0, "unsharp_mask: threshold must be >= 0");
  if (amount == 0.0) return img;
  LinearImage out(img.rows(), img.cols());
  for (int c = 0; c < 3; ++c) {
    const PlaneF blurred = gaussian_blur(img[c], radius);
    const PlaneD detail = img[c].cast<double>() - blurred.cast<double>();
    const PlaneD kept = (detail.abs() < threshold).select(PlaneD::Zero(detail.rows(), detail.cols()), detail);
    out[c] = (img[c].cast<double>() + amount * kept).cast<float>();
  }
  return out;
}

LinearImage jpeg_roundtrip(const LinearImage& img, int quality, const JpegOptions& opts) {
  require(quality >= 1 && quality <= 100,
          "jpeg_roundtrip: quality must be in [1, 100], got " + std::to_string(quality));
  const Rgb8Buffer encoded_input = quantize_8bit(linear_to_srgb(img));
  const auto bytes = encode_jpeg(encoded_input, quality, opts.chroma_subsampling);
  if (opts.debug_dump) write_file_bytes(*opts.debug_dump, bytes);
  return srgb_to_linear(dequantize_8bit(decode_jpeg(bytes)));
}

LinearImage run_postprocess(const LinearImage& img, const PostParams& p) {
  p.validate();
  LinearImage cur = adjust_saturation(img, p.saturation);
  cur = tonemap(cur, p.tone_curve);
  cur = unsharp_mask(cur, p.unsharp.amount, p.unsharp.radius, p.unsharp.threshold);
  if (p.jpeg_quality) {
    JpegOptions jo;
    jo.chroma_subsampling = p.chroma_subsampling;
    cur = jpeg_roundtrip(cur, *p.jpeg_quality, jo);
  }
  return cur;
}

}  // namespace rawpipe
