#pragma once

#include "rawpipe/image.hpp"

namespace rawpipe {

/// 1-D normalized Gaussian taps, length 2 * radius + 1.
Eigen::ArrayXd gaussian_taps(double sigma, int radius);

/// Separable convolution with symmetric taps and half-sample mirror borders.
PlaneF convolve_separable(const PlaneF& src, const Eigen::ArrayXd& row_taps,
                          const Eigen::ArrayXd& col_taps);

/// Dense 2-D correlation with an odd-sized kernel, half-sample mirror borders.
PlaneF convolve2d(const PlaneF& src, const PlaneD& kernel);

/// Gaussian blur; the kernel is truncated at ceil(3 sigma).
PlaneF gaussian_blur(const PlaneF& src, double sigma);
LinearImage gaussian_blur(const LinearImage& img, double sigma);

}  // namespace rawpipe
