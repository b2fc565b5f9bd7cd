#include "rawpipe/fit.hpp"

#include "rawpipe/color.hpp"
#include "rawpipe/config_json.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace rawpipe {

template <typename Scalar, typename Space>
LumaChromaLoss luma_chroma_loss(const Image<Scalar, Space>& a, const Image<Scalar, Space>& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "luma_chroma_loss: image shapes differ");
  require(!a.empty(), "luma_chroma_loss: empty image");
  double sl = 0.0;
  double sc = 0.0;
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      const double dr = double(a[0](r, c)) - double(b[0](r, c));
      const double dg = double(a[1](r, c)) - double(b[1](r, c));
      const double db = double(a[2](r, c)) - double(b[2](r, c));
      const double dy = kLumaR * dr + kLumaG * dg + kLumaB * db;
      const double dcb = db - dy;
      const double dcr = dr - dy;
      sl += dy * dy;
      sc += dcb * dcb + dcr * dcr;
    }
  }
  const double n = double(a.rows()) * double(a.cols());
  return {sl / n, sc / (2.0 * n)};
}

template LumaChromaLoss luma_chroma_loss(const Image<float, LinearSpace>&, const Image<float, LinearSpace>&);
template LumaChromaLoss luma_chroma_loss(const Image<float, SrgbSpace>&, const Image<float, SrgbSpace>&);
template LumaChromaLoss luma_chroma_loss(const Image<double, LinearSpace>&, const Image<double, LinearSpace>&);
template LumaChromaLoss luma_chroma_loss(const Image<double, SrgbSpace>&, const Image<double, SrgbSpace>&);

// ---------------------------------------------------------------------------
// Generic grid search

std::size_t grid_size(const GridAxes& axes) {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& a : axes) {
    if (a.empty()) return 0;
    if (n > std::numeric_limits<std::size_t>::max() / a.size()) return std::numeric_limits<std::size_t>::max();
    n *= a.size();
  }
  return n;
}

std::vector<double> grid_point(const GridAxes& axes, std::size_t index) {
  std::vector<double> v(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const std::size_t n = axes[k].size();
    v[k] = axes[k][index % n];
    index /= n;
  }
  return v;
}

namespace {

// Lower loss wins; NaN never wins; equal losses keep the earlier index.
bool better(double loss, double best) {
  if (std::isnan(loss)) return false;
  return std::isnan(best) || loss < best;
}

}  // namespace

GridResult grid_search(const GridAxes& axes, const GridObjective& objective, int threads) {
  const std::size_t n = grid_size(axes);
  require(n > 0, "grid_search: empty grid");
  std::vector<double> losses(n);
  parallel_for(n, resolve_thread_count(threads), [&](std::size_t i) {
    const auto p = grid_point(axes, i);
    losses[i] = objective(p);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (better(losses[i], losses[best])) best = i;
  }
  return {grid_point(axes, best), losses[best], best};
}

GridAxes refine_axes(const GridAxes& axes, std::span<const double> center, double shrink) {
  require(center.size() == axes.size(), "refine_axes: centre has wrong dimension");
  require(shrink > 0.0 && shrink < 1.0, "refine_axes: shrink must lie in (0, 1)");
  GridAxes out(axes.size());
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const auto& a = axes[k];
    require(!a.empty(), "refine_axes: empty axis");
    const double c = center[k];
    const std::size_t n = a.size();
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    const double span = (*hi - *lo) * shrink;
    if (n == 1 || span == 0.0) {
      out[k].assign(n, c);
      continue;
    }
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = c - 0.5 * span + span * double(i) / double(n - 1);
    }
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(v[i] - c) < std::abs(v[nearest] - c)) nearest = i;
    }
    v[nearest] = c;
    out[k] = std::move(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fit parameters

namespace {

struct FitParamInfo {
  FitParam param;
  std::string_view name;
  FitFamily family;
  double lo;
  double hi;
  bool open_lo;  // lo itself is excluded
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPositiveFloor = 1e-6;

constexpr FitParamInfo kParams[] = {
    {FitParam::exposure_gain, "exposure_gain", FitFamily::tone, 0.0, kInf, true},
    {FitParam::tone_gamma, "tone_gamma", FitFamily::tone, 1.0, 3.0, false},
    {FitParam::tone_strength, "tone_strength", FitFamily::tone, 0.0, 1.0, false},
    {FitParam::saturation, "saturation", FitFamily::color, 0.0, kInf, false},
    {FitParam::wb_r, "wb_r", FitFamily::color, 0.0, kInf, true},
    {FitParam::wb_g, "wb_g", FitFamily::color, 0.0, kInf, true},
    {FitParam::wb_b, "wb_b", FitFamily::color, 0.0, kInf, true},
};

const FitParamInfo& info(FitParam p) {
  for (const auto& i : kParams) {
    if (i.param == p) return i;
  }
  throw ValidationError("unknown fit parameter");
}

bool in_domain(FitParam p, double v) {
  const auto& i = info(p);
  if (!std::isfinite(v)) return false;
  if (i.open_lo ? v <= i.lo : v < i.lo) return false;
  return v <= i.hi;
}

}  // namespace

std::string_view to_string(FitParam p) { return info(p).name; }

FitParam parse_fit_param(std::string_view name) {
  for (const auto& i : kParams) {
    if (i.name == name) return i.param;
  }
  throw ValidationError("unknown fit parameter '" + std::string(name) + "'");
}

FitFamily default_family(FitParam p) { return info(p).family; }

double clamp_to_domain(FitParam p, double v) {
  const auto& i = info(p);
  const double lo = i.open_lo ? i.lo + kPositiveFloor : i.lo;
  return std::clamp(v, lo, i.hi);
}

void FitSpace::validate() const {
  base.validate();
  require(!axes.empty(), "fit space: no fitted parameters");
  bool gamma = false;
  bool strength = false;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const auto& a = axes[k];
    const std::string name(to_string(a.param));
    require(!a.values.empty(), "fit space: axis '" + name + "' has no values");
    for (std::size_t j = 0; j < k; ++j) {
      require(axes[j].param != a.param, "fit space: parameter '" + name + "' listed twice");
    }
    for (double v : a.values) {
      require(in_domain(a.param, v), "fit space: value " + std::to_string(v) + " outside the domain of '" + name + "'");
    }
    gamma = gamma || a.param == FitParam::tone_gamma;
    strength = strength || a.param == FitParam::tone_strength;
  }
  require(!(gamma && strength), "fit space: tone_gamma and tone_strength select different curves");
  require(combinations() <= kMaxCombinations,
          "fit space: " + std::to_string(combinations()) + " combinations exceed the limit of " +
              std::to_string(kMaxCombinations));
}

std::size_t FitSpace::combinations() const { return grid_size(grid()); }

GridAxes FitSpace::grid() const {
  GridAxes g;
  g.reserve(axes.size());
  for (const auto& a : axes) g.push_back(a.values);
  return g;
}

PipelineConfig FitSpace::apply(std::span<const double> values) const {
  require(values.size() == axes.size(), "fit space: wrong number of values");
  PipelineConfig cfg = base;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const double v = values[k];
    switch (axes[k].param) {
      case FitParam::exposure_gain:
        cfg.artifacts.exposure_gain = v;
        cfg.stages.artifacts = true;
        break;
      case FitParam::tone_gamma:
        cfg.post.tone_curve = ToneCurve::gamma(v);
        cfg.stages.postprocess = true;
        break;
      case FitParam::tone_strength:
        cfg.post.tone_curve = ToneCurve::s_curve(v);
        cfg.stages.postprocess = true;
        break;
      case FitParam::saturation:
        cfg.post.saturation = v;
        cfg.stages.postprocess = true;
        break;
      case FitParam::wb_r:
        cfg.demosaic.white_balance.r = v;
        cfg.stages.demosaic = true;
        break;
      case FitParam::wb_g:
        cfg.demosaic.white_balance.g = v;
        cfg.stages.demosaic = true;
        break;
      case FitParam::wb_b:
        cfg.demosaic.white_balance.b = v;
        cfg.stages.demosaic = true;
        break;
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Pipeline fitting

namespace {

struct Scoring {
  bool luma = false;
  bool chroma = false;

  [[nodiscard]] double objective(const LumaChromaLoss& l) const {
    return (luma ? l.luma : 0.0) + (chroma ? l.chroma : 0.0);
  }
};

Scoring scoring_for(const FitSpace& space) {
  Scoring s;
  for (const auto& a : space.axes) {
    (a.family == FitFamily::tone ? s.luma : s.chroma) = true;
  }
  return s;
}

LinearImage pre_postprocess(const LinearImage& input, const PipelineConfig& cfg) {
  cfg.validate();
  return run_denoise_stage(run_demosaic_stage(run_artifact_stage(input, cfg), cfg), cfg);
}

// Everything upstream of postprocessing, as a cache key.
std::string prefix_key(const PipelineConfig& cfg) {
  Json j = config_to_json(cfg);
  j.erase("post");
  j["stages"].erase("postprocess");
  return j.dump();
}

// Objective first, then combined loss; remaining ties keep the lower index.
bool candidate_better(const FitCandidate& a, const FitCandidate& b) {
  if (std::isnan(a.objective)) return false;
  if (std::isnan(b.objective)) return true;
  if (a.objective != b.objective) return a.objective < b.objective;
  return a.loss.luma + a.loss.chroma < b.loss.luma + b.loss.chroma;
}

}  // namespace

FitResult grid_search_fit(const LinearImage& input, const LinearImage& target, const FitSpace& space,
                          const FitOptions& opts) {
  space.validate();
  require(!input.empty(), "fit: empty input image");
  const GridAxes axes = space.grid();
  const std::size_t n = grid_size(axes);
  const Scoring scoring = scoring_for(space);
  const int threads = resolve_thread_count(opts.threads);

  std::vector<FitCandidate> cands(n);
  std::vector<PipelineConfig> configs(n);
  for (std::size_t i = 0; i < n; ++i) {
    cands[i].values = grid_point(axes, i);
    configs[i] = space.apply(cands[i].values);
  }

  auto score = [&](std::size_t i, const LinearImage& out) {
    require(out.rows() == target.rows() && out.cols() == target.cols(),
            "fit: pipeline output and target differ in size");
    cands[i].loss = luma_chroma_loss(out, target);
    cands[i].objective = scoring.objective(cands[i].loss);
  };

  if (opts.use_cache) {
    std::map<std::string, std::vector<std::size_t>> groups_by_key;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < n; ++i) {
      auto key = prefix_key(configs[i]);
      auto [it, inserted] = groups_by_key.try_emplace(key);
      if (inserted) order.push_back(key);
      it->second.push_back(i);
    }
    std::vector<const std::vector<std::size_t>*> groups;
    groups.reserve(order.size());
    for (const auto& k : order) groups.push_back(&groups_by_key.at(k));

    if (groups.size() == 1) {
      const auto& members = *groups.front();
      const LinearImage base = pre_postprocess(input, configs[members.front()]);
      parallel_for(members.size(), threads, [&](std::size_t m) {
        const std::size_t i = members[m];
        score(i, run_postprocess_stage(base, configs[i]));
      });
    } else {
      parallel_for(groups.size(), threads, [&](std::size_t g) {
        const auto& members = *groups[g];
        const LinearImage base = pre_postprocess(input, configs[members.front()]);
        for (std::size_t i : members) score(i, run_postprocess_stage(base, configs[i]));
      });
    }
  } else {
    parallel_for(n, threads, [&](std::size_t i) { score(i, run_pipeline(input, configs[i])); });
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (candidate_better(cands[i], cands[best])) best = i;
  }

  FitResult res;
  res.best_config = configs[best];
  res.best_values = cands[best].values;
  res.loss = cands[best].loss;
  res.objective = cands[best].objective;
  if (opts.keep_table) res.table = std::move(cands);
  return res;
}

FitResult grid_search_fit(const LinearImage& input, const SrgbImage& target, const FitSpace& space,
                          const FitOptions& opts) {
  return grid_search_fit(input, srgb_to_linear(target), space, opts);
}

FitSpace refined_space(const FitResult& previous, const FitSpace& space, double shrink) {
  require(previous.best_values.size() == space.axes.size(), "refine: result does not match the fit space");
  const GridAxes g = refine_axes(space.grid(), previous.best_values, shrink);
  FitSpace out = space;
  for (std::size_t k = 0; k < out.axes.size(); ++k) {
    auto& vals = out.axes[k].values;
    vals = g[k];
    for (double& v : vals) v = clamp_to_domain(out.axes[k].param, v);
  }
  return out;
}

FitResult refine_fit(const LinearImage& input, const LinearImage& target, const FitResult& previous,
                     const FitSpace& space, double shrink, const FitOptions& opts) {
  return grid_search_fit(input, target, refined_space(previous, space, shrink), opts);
}

}  // namespace rawpipe
