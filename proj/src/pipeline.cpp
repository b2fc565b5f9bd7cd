#include "rawpipe/pipeline.hpp"

#include "rawpipe/error.hpp"

#include <cmath>
#include <string>
#include <type_traits>

namespace rawpipe {

std::uint64_t stream_seed(std::uint64_t master, StreamKey key) {
  return derive_seed(master, {static_cast<std::uint64_t>(key)});
}

void PipelineConfig::validate() const {
  require(!stages.mosaick || stages.demosaic, "config: mosaick requires the demosaic stage");
  require(std::isfinite(artifacts.exposure_gain) && artifacts.exposure_gain > 0.0,
          "config: exposure gain must be > 0");
  artifacts.blur.validate();
  artifacts.aberration.validate();
  artifacts.noise.validate();
  const auto& wb = demosaic.white_balance;
  require(wb.r > 0.0 && wb.g > 0.0 && wb.b > 0.0, "config: white balance gains must be > 0");
  if (demosaic.defect_threshold) {
    require(*demosaic.defect_threshold > 0.0, "config: defect threshold must be > 0");
  }
  require(demosaic.ahd_median_passes >= 0, "config: ahd median passes must be >= 0");
  denoise.validate();
  post.validate();
}

SensorData run_artifact_stage(const LinearImage& img, const PipelineConfig& cfg) {
  const auto& a = cfg.artifacts;
  LinearImage cur = img;
  if (cfg.stages.artifacts) {
    if (a.exposure_gain != 1.0) cur = apply_exposure(cur, a.exposure_gain);
    cur = apply_motion_blur(cur, a.blur);
    cur = apply_chromatic_aberration(cur, a.aberration);
  }
  const std::uint64_t noise_seed = stream_seed(cfg.seed, StreamKey::noise);
  if (cfg.stages.mosaick) {
    BayerMosaic m = mosaick(cur, a.pattern);
    if (cfg.stages.artifacts) m = add_noise(m, a.noise, noise_seed);
    return {std::move(m), LinearImage()};
  }
  if (cfg.stages.artifacts) cur = add_noise(cur, a.noise, noise_seed);
  return {std::nullopt, std::move(cur)};
}

LinearImage run_demosaic_stage(const SensorData& data, const PipelineConfig& cfg) {
  const auto& d = cfg.demosaic;
  if (data.mosaic) {
    BayerMosaic m = *data.mosaic;
    if (d.defect_threshold) m = correct_defective_pixels(m, *d.defect_threshold);
    m = white_balance(m, d.white_balance);
    AhdOptions ahd;
    ahd.median_passes = d.ahd_median_passes;
    return demosaic(m, d.method, ahd);
  }
  if (cfg.stages.demosaic) return white_balance(data.image, d.white_balance);
  return data.image;
}

LinearImage run_denoise_stage(const LinearImage& img, const PipelineConfig& cfg) {
  return cfg.stages.denoise ? run_denoise_chain(img, cfg.denoise) : img;
}

LinearImage run_postprocess_stage(const LinearImage& img, const PipelineConfig& cfg) {
  return cfg.stages.postprocess ? run_postprocess(img, cfg.post) : img;
}

LinearImage run_pipeline(const LinearImage& img, const PipelineConfig& cfg) {
  cfg.validate();
  require(!img.empty(), "run_pipeline: empty image");
  LinearImage out = run_demosaic_stage(run_artifact_stage(img, cfg), cfg);
  out = run_denoise_stage(out, cfg);
  return run_postprocess_stage(out, cfg);
}

// ---------------------------------------------------------------------------
// Ranges

int IntRange::sample(Rng& rng) const {
  return lo == hi ? lo : static_cast<int>(rng.uniform_int(lo, hi));
}

namespace {

void check_range(const Range& r, const char* name) {
  require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi,
          std::string("ranges: '") + name + "' needs finite lo <= hi");
}

void check_range(const IntRange& r, const char* name) {
  require(r.lo <= r.hi, std::string("ranges: '") + name + "' needs lo <= hi");
}

template <typename T>
void check_choice(const Choice<T>& c, const char* name) {
  require(c.valid(), std::string("ranges: '") + name + "' needs non-negative weights, not all zero");
}

void check_curve(const ToneCurveRange& t, const char* name) {
  check_choice(t.kind, name);
  check_range(t.gamma, name);
  check_range(t.strength, name);
}

ToneCurve sample_curve(const ToneCurveRange& t, Rng& rng) {
  const CurveKind kind = t.kind.sample(rng);
  const double gamma = t.gamma.sample(rng);
  const double strength = t.strength.sample(rng);
  switch (kind) {
    case CurveKind::none: return ToneCurve::none();
    case CurveKind::gamma: return ToneCurve::gamma(gamma);
    case CurveKind::s_curve: return ToneCurve::s_curve(strength);
  }
  return ToneCurve::none();
}

}  // namespace

void ParamRanges::validate() const {
  require(!stages.mosaick || stages.demosaic, "ranges: mosaick requires the demosaic stage");
  check_range(exposure_gain, "exposure_gain");
  check_range(blur_length, "blur_length");
  check_range(blur_angle, "blur_angle");
  check_range(red_scale, "red_scale");
  check_range(blue_scale, "blue_scale");
  check_range(gaussian_std, "gaussian_std");
  check_range(poisson_mult, "poisson_mult");
  check_choice(noise_mode, "noise_mode");
  check_choice(pattern, "pattern");
  check_choice(demosaic_method, "demosaic_method");
  check_range(wb_r, "wb_r");
  check_range(wb_g, "wb_g");
  check_range(wb_b, "wb_b");
  if (defect_threshold) check_range(*defect_threshold, "defect_threshold");
  check_range(ahd_median_passes, "ahd_median_passes");
  check_curve(pre_tonemap, "pre_tonemap");
  bool seen[3] = {false, false, false};
  for (const auto& step : denoise_steps) {
    require(!seen[step.index()], "ranges: each denoise filter type may appear at most once");
    seen[step.index()] = true;
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BilateralRange>) {
            check_range(s.sigma_spatial, "bilateral.sigma_spatial");
            check_range(s.sigma_range, "bilateral.sigma_range");
            check_range(s.radius, "bilateral.radius");
          } else if constexpr (std::is_same_v<T, MedianRange>) {
            check_choice(s.window, "median.window");
            check_choice(s.target, "median.target");
          } else {
            check_range(s.threshold, "wavelet.threshold");
            check_range(s.levels, "wavelet.levels");
          }
        },
        step);
  }
  check_range(saturation, "saturation");
  check_curve(tone_curve, "tone_curve");
  check_range(unsharp_amount, "unsharp_amount");
  check_range(unsharp_radius, "unsharp_radius");
  check_range(unsharp_threshold, "unsharp_threshold");
  if (jpeg_quality) check_range(*jpeg_quality, "jpeg_quality");
}

PipelineConfig sample_params(const ParamRanges& ranges, Rng& rng) {
  ranges.validate();
  const std::uint64_t base = rng.next_u64();
  PipelineConfig cfg;
  cfg.seed = stream_seed(base, StreamKey::sample_seed);
  cfg.stages = ranges.stages;

  Rng art(stream_seed(base, StreamKey::sample_artifacts));
  cfg.artifacts.exposure_gain = ranges.exposure_gain.sample(art);
  cfg.artifacts.blur.length = ranges.blur_length.sample(art);
  cfg.artifacts.blur.angle = ranges.blur_angle.sample(art);
  cfg.artifacts.aberration.red_scale = ranges.red_scale.sample(art);
  cfg.artifacts.aberration.blue_scale = ranges.blue_scale.sample(art);
  cfg.artifacts.noise.gaussian_std = ranges.gaussian_std.sample(art);
  cfg.artifacts.noise.poisson_mult = ranges.poisson_mult.sample(art);
  cfg.artifacts.noise.mode = ranges.noise_mode.sample(art);
  cfg.artifacts.pattern = ranges.pattern.sample(art);

  Rng dem(stream_seed(base, StreamKey::sample_demosaic));
  cfg.demosaic.method = ranges.demosaic_method.sample(dem);
  cfg.demosaic.white_balance = {ranges.wb_r.sample(dem), ranges.wb_g.sample(dem), ranges.wb_b.sample(dem)};
  if (ranges.defect_threshold) cfg.demosaic.defect_threshold = ranges.defect_threshold->sample(dem);
  cfg.demosaic.ahd_median_passes = ranges.ahd_median_passes.sample(dem);

  Rng den(stream_seed(base, StreamKey::sample_denoise));
  cfg.denoise.pre_tonemap = sample_curve(ranges.pre_tonemap, den);
  cfg.denoise.invert_pre_tonemap_after = ranges.invert_pre_tonemap_after;
  for (const auto& step : ranges.denoise_steps) {
    cfg.denoise.steps.push_back(std::visit(
        [&den](const auto& s) -> DenoiseStep {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BilateralRange>) {
            return BilateralStep{s.sigma_spatial.sample(den), s.sigma_range.sample(den), s.radius.sample(den)};
          } else if constexpr (std::is_same_v<T, MedianRange>) {
            return MedianStep{s.window.sample(den), s.target.sample(den)};
          } else {
            return WaveletStep{s.threshold.sample(den), s.levels.sample(den)};
          }
        },
        step));
  }

  Rng post(stream_seed(base, StreamKey::sample_post));
  cfg.post.saturation = ranges.saturation.sample(post);
  cfg.post.tone_curve = sample_curve(ranges.tone_curve, post);
  cfg.post.unsharp.amount = ranges.unsharp_amount.sample(post);
  cfg.post.unsharp.radius = ranges.unsharp_radius.sample(post);
  cfg.post.unsharp.threshold = ranges.unsharp_threshold.sample(post);
  if (ranges.jpeg_quality) cfg.post.jpeg_quality = ranges.jpeg_quality->sample(post);
  cfg.post.chroma_subsampling = ranges.chroma_subsampling;

  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Presets

std::string_view to_string(PresetName p) {
  switch (p) {
    case PresetName::awgn: return "awgn";
    case PresetName::amwgn: return "amwgn";
    case PresetName::full: return "full";
    case PresetName::s7_iso800: return "s7-iso800";
  }
  return "?";
}

PresetName parse_preset_name(std::string_view name) {
  for (auto p : {PresetName::awgn, PresetName::amwgn, PresetName::full, PresetName::s7_iso800}) {
    if (name == to_string(p)) return p;
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

namespace {

/// Camera-processing arm used by the denoising datasets: mosaic + Kodak
/// demosaic, pre-tonemapped bilateral + median, unsharp + JPEG. Saturation and
/// the tone curve stay neutral so targets keep their tones.
void enable_camera_processing(ParamRanges& r) {
  r.stages = {true, true, true, true, true};
  r.pattern = Choice<CfaPattern>{{{CfaPattern::rggb, 1.0},
                                  {CfaPattern::bggr, 1.0},
                                  {CfaPattern::grbg, 1.0},
                                  {CfaPattern::gbrg, 1.0}}};
  r.demosaic_method = Choice<DemosaicMethod>::only(DemosaicMethod::kodak);
  r.pre_tonemap.kind = Choice<CurveKind>{{{CurveKind::gamma, 1.0}, {CurveKind::s_curve, 1.0}}};
  r.pre_tonemap.gamma = {1.5, 2.5};
  r.pre_tonemap.strength = {0.25, 0.75};
  r.denoise_steps = {
      BilateralRange{Range{0.5, 1.5}, Range{0.02, 0.08}, IntRange::fixed(2)},
      MedianRange{Choice<int>::only(3),
                  Choice<MedianTarget>{{{MedianTarget::per_channel, 1.0}, {MedianTarget::luma_only, 1.0}}}},
  };
  r.unsharp_amount = {0.0, 1.0};
  r.unsharp_radius = {0.8, 1.5};
  r.unsharp_threshold = Range::fixed(0.0);
  r.jpeg_quality = IntRange{60, 95};
  r.chroma_subsampling = true;
}

}  // namespace

ParamRanges preset(PresetName name) {
  ParamRanges r;
  r.stages.artifacts = true;
  switch (name) {
    case PresetName::awgn:
      r.gaussian_std = {0.0, 0.2};
      r.poisson_mult = Range::fixed(0.0);
      break;
    case PresetName::amwgn:
      r.gaussian_std = {0.0, 0.1};
      r.poisson_mult = {0.0, 0.02};
      break;
    case PresetName::full:
      r.gaussian_std = {0.0, 0.1};
      r.poisson_mult = {0.0, 0.02};
      enable_camera_processing(r);
      break;
    case PresetName::s7_iso800:
      r.gaussian_std = Range::fixed(0.007);
      r.poisson_mult = Range::fixed(0.02);
      enable_camera_processing(r);
      break;
  }
  return r;
}

ParamRanges preset(std::string_view name) { return preset(parse_preset_name(name)); }

AblationStage parse_ablation_stage(std::string_view name) {
  if (name == "postprocess") return AblationStage::postprocess;
  if (name == "denoise") return AblationStage::denoise;
  if (name == "demosaic") return AblationStage::demosaic;
  throw ValidationError("unknown ablation stage '" + std::string(name) + "'");
}

ParamRanges ablation(const ParamRanges& ranges, AblationStage drop) {
  ParamRanges out = ranges;
  switch (drop) {
    case AblationStage::postprocess: out.stages.postprocess = false; break;
    case AblationStage::denoise: out.stages.denoise = false; break;
    case AblationStage::demosaic:
      out.stages.demosaic = false;
      out.stages.mosaick = false;
      break;
  }
  return out;
}

}  // namespace rawpipe
