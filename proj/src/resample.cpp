#include "rawpipe/resample.hpp"

#include "rawpipe/error.hpp"

#include <string>

namespace rawpipe {

LinearImage downsample(const LinearImage& img, int factor) {
  require(factor >= 1, "downsample: factor must be >= 1, got " + std::to_string(factor));
  if (factor == 1) return img;
  const Index rows = img.rows() / factor;
  const Index cols = img.cols() / factor;
  require(rows > 0 && cols > 0, "downsample: image smaller than one block");
  const double inv_area = 1.0 / (static_cast<double>(factor) * factor);
  LinearImage out(rows, cols);
  for (int c = 0; c < 3; ++c) {
    const PlaneF& src = img[c];
    for (Index r = 0; r < rows; ++r) {
      for (Index q = 0; q < cols; ++q) {
        const double sum =
            src.block(r * factor, q * factor, factor, factor).template cast<double>().sum();
        out[c](r, q) = static_cast<float>(sum * inv_area);
      }
    }
  }
  return out;
}

LinearImage upsample_replicate(const LinearImage& img, int factor) {
  require(factor >= 1, "upsample_replicate: factor must be >= 1");
  LinearImage out(img.rows() * factor, img.cols() * factor);
  for (int c = 0; c < 3; ++c) {
    for (Index r = 0; r < out.rows(); ++r) {
      for (Index q = 0; q < out.cols(); ++q) out[c](r, q) = img[c](r / factor, q / factor);
    }
  }
  return out;
}

LinearImage crop(const LinearImage& img, const PatchSpec& spec) {
  require(spec.size > 0 && spec.top >= 0 && spec.left >= 0 && spec.top + spec.size <= img.rows() &&
              spec.left + spec.size <= img.cols(),
          "crop: patch at (" + std::to_string(spec.top) + ", " + std::to_string(spec.left) +
              ") size " + std::to_string(spec.size) + " outside " + std::to_string(img.rows()) +
              "x" + std::to_string(img.cols()) + " image");
  return map_planes(img, [&](const PlaneF& p) -> PlaneF {
    return p.block(spec.top, spec.left, spec.size, spec.size);
  });
}

std::vector<std::pair<PatchSpec, LinearImage>> extract_patches(const LinearImage& img, int n,
                                                               Index size, Rng& rng,
                                                               const std::string& source_id) {
  require(n >= 0, "extract_patches: negative patch count");
  require(size >= 1, "extract_patches: patch size must be positive");
  if (img.rows() < size || img.cols() < size) {
    throw ValidationError("extract_patches: image is " + std::to_string(img.rows()) + "x" +
                          std::to_string(img.cols()) + ", smaller than the " +
                          std::to_string(size) + "x" + std::to_string(size) + " patch");
  }
  std::vector<std::pair<PatchSpec, LinearImage>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    PatchSpec spec;
    spec.source_id = source_id;
    spec.size = size;
    spec.top = rng.uniform_int(0, img.rows() - size);
    spec.left = rng.uniform_int(0, img.cols() - size);
    LinearImage patch = crop(img, spec);
    out.emplace_back(std::move(spec), std::move(patch));
  }
  return out;
}

}  // namespace rawpipe
