#include "rawpipe/filters.hpp"

#include "rawpipe/border.hpp"
#include "rawpipe/error.hpp"

#include <cmath>

namespace rawpipe {

Eigen::ArrayXd gaussian_taps(double sigma, int radius) {
  require(sigma > 0.0, "gaussian_taps: sigma must be positive");
  require(radius >= 0, "gaussian_taps: negative radius");
  Eigen::ArrayXd taps(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    taps(i + radius) = std::exp(-0.5 * (i * i) / (sigma * sigma));
  }
  return taps / taps.sum();
}

PlaneF convolve_separable(const PlaneF& src, const Eigen::ArrayXd& row_taps,
                          const Eigen::ArrayXd& col_taps) {
  const Index rows = src.rows();
  const Index cols = src.cols();
  const Index rx = (row_taps.size() - 1) / 2;
  const Index ry = (col_taps.size() - 1) / 2;
  PlaneD tmp(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (Index k = -rx; k <= rx; ++k) acc += row_taps(k + rx) * src(r, reflect_symmetric(c + k, cols));
      tmp(r, c) = acc;
    }
  }
  PlaneF out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (Index k = -ry; k <= ry; ++k) acc += col_taps(k + ry) * tmp(reflect_symmetric(r + k, rows), c);
      out(r, c) = static_cast<float>(acc);
    }
  }
  return out;
}

PlaneF convolve2d(const PlaneF& src, const PlaneD& kernel) {
  require(kernel.rows() % 2 == 1 && kernel.cols() % 2 == 1, "convolve2d: kernel must be odd-sized");
  const Index ky = kernel.rows() / 2;
  const Index kx = kernel.cols() / 2;
  const Index rows = src.rows();
  const Index cols = src.cols();
  PlaneF out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (Index i = -ky; i <= ky; ++i) {
        const Index sr = reflect_symmetric(r - i, rows);
        for (Index j = -kx; j <= kx; ++j) {
          const double w = kernel(i + ky, j + kx);
          if (w != 0.0) acc += w * src(sr, reflect_symmetric(c - j, cols));
        }
      }
      out(r, c) = static_cast<float>(acc);
    }
  }
  return out;
}

PlaneF gaussian_blur(const PlaneF& src, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const Eigen::ArrayXd taps = gaussian_taps(sigma, radius);
  return convolve_separable(src, taps, taps);
}

LinearImage gaussian_blur(const LinearImage& img, double sigma) {
  return map_planes(img, [sigma](const PlaneF& p) { return gaussian_blur(p, sigma); });
}

}  // namespace rawpipe
