#pragma once

#include "rawpipe/artifacts.hpp"
#include "rawpipe/demosaic.hpp"
#include "rawpipe/denoise.hpp"
#include "rawpipe/image.hpp"
#include "rawpipe/postprocess.hpp"
#include "rawpipe/rng.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rawpipe {

struct StageToggles {
  bool artifacts = false;
  bool mosaick = false;
  bool demosaic = false;
  bool denoise = false;
  bool postprocess = false;
  friend bool operator==(const StageToggles&, const StageToggles&) = default;
};

struct ArtifactParams {
  double exposure_gain = 1.0;
  BlurParams blur;
  AberrationParams aberration;
  NoiseParams noise;
  CfaPattern pattern = CfaPattern::rggb;
  friend bool operator==(const ArtifactParams&, const ArtifactParams&) = default;
};

struct DemosaicParams {
  DemosaicMethod method = DemosaicMethod::kodak;
  WhiteBalanceGains white_balance;
  std::optional<double> defect_threshold;  // nullopt: correction disabled
  int ahd_median_passes = 2;
  friend bool operator==(const DemosaicParams&, const DemosaicParams&) = default;
};

/// Fully resolved parameters for one degradation run.
struct PipelineConfig {
  StageToggles stages;
  ArtifactParams artifacts;
  DemosaicParams demosaic;
  DenoiseChain denoise;
  PostParams post;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Random substream keys derived from PipelineConfig::seed. Each consumer owns
// its key, so adding a consumer does not shift anyone else's draws.
enum class StreamKey : std::uint64_t {
  noise = 1,
  sample_artifacts = 101,
  sample_demosaic = 102,
  sample_denoise = 103,
  sample_post = 104,
  sample_seed = 105,
};

std::uint64_t stream_seed(std::uint64_t master, StreamKey key);

/// Output of the artifact stage: either a mosaic or a full RGB image.
struct SensorData {
  std::optional<BayerMosaic> mosaic;
  LinearImage image;
};

SensorData run_artifact_stage(const LinearImage& img, const PipelineConfig& cfg);
LinearImage run_demosaic_stage(const SensorData& data, const PipelineConfig& cfg);
LinearImage run_denoise_stage(const LinearImage& img, const PipelineConfig& cfg);
LinearImage run_postprocess_stage(const LinearImage& img, const PipelineConfig& cfg);

/// Artifacts -> demosaic -> denoise -> postprocess, each stage gated by its toggle.
LinearImage run_pipeline(const LinearImage& img, const PipelineConfig& cfg);

// ---------------------------------------------------------------------------
// Sampling distributions

/// Uniform interval; lo == hi is a fixed value.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  static Range fixed(double v) { return {v, v}; }
  [[nodiscard]] bool is_fixed() const { return lo == hi; }
  [[nodiscard]] double sample(Rng& rng) const { return is_fixed() ? lo : rng.uniform(lo, hi); }
  friend bool operator==(const Range&, const Range&) = default;
};

/// Uniform integer interval, closed.
struct IntRange {
  int lo = 0;
  int hi = 0;

  static IntRange fixed(int v) { return {v, v}; }
  [[nodiscard]] int sample(Rng& rng) const;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Weighted categorical choice.
template <typename T>
struct Choice {
  std::vector<std::pair<T, double>> options;

  static Choice only(T v) { return Choice{{{v, 1.0}}}; }

  [[nodiscard]] bool valid() const {
    double total = 0.0;
    for (const auto& [v, w] : options) {
      if (!(w >= 0.0)) return false;
      total += w;
    }
    return total > 0.0;
  }

  [[nodiscard]] T sample(Rng& rng) const {
    double total = 0.0;
    for (const auto& o : options) total += o.second;
    if (options.size() == 1) return options.front().first;
    double u = rng.uniform() * total;
    for (const auto& [v, w] : options) {
      if (u < w) return v;
      u -= w;
    }
    for (auto it = options.rbegin(); it != options.rend(); ++it) {
      if (it->second > 0.0) return it->first;
    }
    return options.back().first;
  }

  friend bool operator==(const Choice&, const Choice&) = default;
};

struct ToneCurveRange {
  Choice<CurveKind> kind = Choice<CurveKind>::only(CurveKind::none);
  Range gamma = Range::fixed(2.0);
  Range strength = Range::fixed(0.5);
  friend bool operator==(const ToneCurveRange&, const ToneCurveRange&) = default;
};

struct BilateralRange {
  Range sigma_spatial = Range::fixed(1.0);
  Range sigma_range = Range::fixed(0.05);
  IntRange radius = IntRange::fixed(2);
  friend bool operator==(const BilateralRange&, const BilateralRange&) = default;
};

struct MedianRange {
  Choice<int> window = Choice<int>::only(3);
  Choice<MedianTarget> target = Choice<MedianTarget>::only(MedianTarget::per_channel);
  friend bool operator==(const MedianRange&, const MedianRange&) = default;
};

struct WaveletRange {
  Range threshold = Range::fixed(0.01);
  IntRange levels = IntRange::fixed(2);
  friend bool operator==(const WaveletRange&, const WaveletRange&) = default;
};

using DenoiseStepRange = std::variant<BilateralRange, MedianRange, WaveletRange>;

/// Sampling distribution over PipelineConfig, field for field.
struct ParamRanges {
  StageToggles stages;

  Range exposure_gain = Range::fixed(1.0);
  Range blur_length = Range::fixed(0.0);
  Range blur_angle = Range::fixed(0.0);
  Range red_scale = Range::fixed(1.0);
  Range blue_scale = Range::fixed(1.0);
  Range gaussian_std = Range::fixed(0.0);
  Range poisson_mult = Range::fixed(0.0);
  Choice<NoiseMode> noise_mode = Choice<NoiseMode>::only(NoiseMode::shot_variance);
  Choice<CfaPattern> pattern = Choice<CfaPattern>::only(CfaPattern::rggb);

  Choice<DemosaicMethod> demosaic_method = Choice<DemosaicMethod>::only(DemosaicMethod::kodak);
  Range wb_r = Range::fixed(1.0);
  Range wb_g = Range::fixed(1.0);
  Range wb_b = Range::fixed(1.0);
  std::optional<Range> defect_threshold;
  IntRange ahd_median_passes = IntRange::fixed(2);

  ToneCurveRange pre_tonemap;
  bool invert_pre_tonemap_after = false;
  std::vector<DenoiseStepRange> denoise_steps;

  Range saturation = Range::fixed(1.0);
  ToneCurveRange tone_curve;
  Range unsharp_amount = Range::fixed(0.0);
  Range unsharp_radius = Range::fixed(1.0);
  Range unsharp_threshold = Range::fixed(0.0);
  std::optional<IntRange> jpeg_quality;
  bool chroma_subsampling = true;

  void validate() const;
  friend bool operator==(const ParamRanges&, const ParamRanges&) = default;
};

enum class PresetName { awgn, amwgn, full, s7_iso800 };

std::string_view to_string(PresetName p);
PresetName parse_preset_name(std::string_view name);

ParamRanges preset(PresetName name);
ParamRanges preset(std::string_view name);

/// Draws every scalar independently. The config seed and each stage group use
/// their own substreams of one base draw from `rng`.
PipelineConfig sample_params(const ParamRanges& ranges, Rng& rng);

enum class AblationStage { postprocess, denoise, demosaic };

AblationStage parse_ablation_stage(std::string_view name);

/// Forces one stage off; dropping demosaic also drops mosaicking.
ParamRanges ablation(const ParamRanges& ranges, AblationStage drop);

}  // namespace rawpipe
