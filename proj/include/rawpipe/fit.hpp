#pragma once

#include "rawpipe/image.hpp"
#include "rawpipe/pipeline.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace rawpipe {

struct LumaChromaLoss {
  double luma = 0.0;    // MSE of the luma plane
  double chroma = 0.0;  // MSE pooled over the two color-difference planes
};

template <typename Scalar, typename Space>
LumaChromaLoss luma_chroma_loss(const Image<Scalar, Space>& a, const Image<Scalar, Space>& b);

// ---------------------------------------------------------------------------
// Generic exhaustive grid search

using GridAxes = std::vector<std::vector<double>>;
using GridObjective = std::function<double(std::span<const double>)>;

struct GridResult {
  std::vector<double> best;
  double loss = 0.0;
  std::size_t best_index = 0;
};

std::size_t grid_size(const GridAxes& axes);

/// Values of grid point `index`; the first axis varies slowest.
std::vector<double> grid_point(const GridAxes& axes, std::size_t index);

/// Arg-min over the full product grid; ties go to the lowest enumeration index.
GridResult grid_search(const GridAxes& axes, const GridObjective& objective, int threads = 1);

/// Same cardinality per axis, centred on `center`, span scaled by `shrink`.
/// The centre value is always part of the new axis.
GridAxes refine_axes(const GridAxes& axes, std::span<const double> center, double shrink);

// ---------------------------------------------------------------------------
// Pipeline parameter fitting

enum class FitParam { exposure_gain, tone_gamma, tone_strength, saturation, wb_r, wb_g, wb_b };

/// Tone parameters are scored on luma, color parameters on chroma.
enum class FitFamily { tone, color };

std::string_view to_string(FitParam p);
FitParam parse_fit_param(std::string_view name);
FitFamily default_family(FitParam p);

struct FitAxis {
  FitParam param = FitParam::saturation;
  std::vector<double> values;
  FitFamily family = FitFamily::color;
};

struct FitSpace {
  static constexpr std::size_t kMaxCombinations = 1'000'000;

  PipelineConfig base;  // every non-fitted parameter, denoise included
  std::vector<FitAxis> axes;

  void validate() const;
  [[nodiscard]] std::size_t combinations() const;
  [[nodiscard]] GridAxes grid() const;
  [[nodiscard]] PipelineConfig apply(std::span<const double> values) const;
};

/// Clamps a fitted value into the valid domain of its parameter.
double clamp_to_domain(FitParam p, double v);

struct FitCandidate {
  std::vector<double> values;
  LumaChromaLoss loss;
  double objective = 0.0;
};

struct FitResult {
  PipelineConfig best_config;
  std::vector<double> best_values;
  LumaChromaLoss loss;
  double objective = 0.0;
  std::vector<FitCandidate> table;  // filled when FitOptions::keep_table
};

struct FitOptions {
  bool keep_table = false;
  bool use_cache = true;  // reuse pre-postprocess outputs across candidates
  int threads = 1;
};

/// Exhaustively evaluates every grid point against a linear target.
FitResult grid_search_fit(const LinearImage& input, const LinearImage& target,
                          const FitSpace& space, const FitOptions& opts = {});

/// Linearizes the camera JPEG target first.
FitResult grid_search_fit(const LinearImage& input, const SrgbImage& target,
                          const FitSpace& space, const FitOptions& opts = {});

/// Re-runs the search on a grid shrunk around the previous optimum.
FitResult refine_fit(const LinearImage& input, const LinearImage& target,
                     const FitResult& previous, const FitSpace& space, double shrink,
                     const FitOptions& opts = {});

/// FitSpace whose axes are the refined grid around `previous`.
FitSpace refined_space(const FitResult& previous, const FitSpace& space, double shrink);

}  // namespace rawpipe
