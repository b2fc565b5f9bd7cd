#pragma once

#include "rawpipe/image.hpp"

namespace rawpipe {

// Out-of-range index folding. Both variants handle offsets larger than the extent.

/// Half-sample mirror: ... 1 0 | 0 1 ... n-1 | n-1 n-2 ...
/// Symmetric kernels applied with this border conserve the image sum.
inline Index reflect_symmetric(Index i, Index n) {
  const Index period = 2 * n;
  Index m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

/// Whole-sample mirror: ... 2 1 | 0 1 ... n-1 | n-2 n-3 ...
/// Keeps index parity, so Bayer sites reflect onto sites of the same color.
inline Index reflect101(Index i, Index n) {
  if (n == 1) return 0;
  const Index period = 2 * (n - 1);
  Index m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

}  // namespace rawpipe
