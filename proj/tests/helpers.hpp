#pragma once

#include "rawpipe/color.hpp"
#include "rawpipe/image.hpp"
#include "rawpipe/io.hpp"
#include "rawpipe/resample.hpp"
#include "rawpipe/rng.hpp"

#include <cmath>
#include <filesystem>
#include <string>

namespace testutil {

using namespace rawpipe;

inline std::filesystem::path data_dir() { return RAWPIPE_TEST_DATA; }

inline LinearImage random_image(Index rows, Index cols, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  LinearImage img(rows, cols);
  for (int ch = 0; ch < 3; ++ch)
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) img[ch](r, c) = float(rng.uniform(lo, hi));
  return img;
}

// Linear crop of a bundled photograph.
inline LinearImage natural_crop(const std::string& name, Index size, Index top, Index left, int factor = 1) {
  const LinearImage full = downsample(srgb_to_linear(read_image(data_dir() / name)), factor);
  return crop(full, {name, top, left, size});
}

inline double max_abs_diff(const LinearImage& a, const LinearImage& b) {
  double m = 0.0;
  for (int ch = 0; ch < 3; ++ch) m = std::max(m, double((a[ch] - b[ch]).abs().maxCoeff()));
  return m;
}

// Fresh scratch directory below the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("rawpipe_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testutil
