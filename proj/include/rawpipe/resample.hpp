#pragma once

#include "rawpipe/image.hpp"
#include "rawpipe/rng.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rawpipe {

/// Box-average downsampling. Trailing rows/cols that do not fill a block are dropped.
LinearImage downsample(const LinearImage& img, int factor);

/// Nearest-neighbour upsampling by block replication.
LinearImage upsample_replicate(const LinearImage& img, int factor);

/// Square crop location inside a source image.
struct PatchSpec {
  std::string source_id;
  Index top = 0;
  Index left = 0;
  Index size = 0;

  friend bool operator==(const PatchSpec&, const PatchSpec&) = default;
};

LinearImage crop(const LinearImage& img, const PatchSpec& spec);

/// Draws `n` uniformly placed, fully in-bounds square crops.
std::vector<std::pair<PatchSpec, LinearImage>> extract_patches(const LinearImage& img, int n,
                                                               Index size, Rng& rng,
                                                               const std::string& source_id = {});

}  // namespace rawpipe
