#include "rawpipe/config_json.hpp"

#include "rawpipe/error.hpp"

#include <set>
#include <string>
#include <type_traits>

namespace rawpipe {

namespace {

// ---------------------------------------------------------------------------
// Strict object reading

class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    require(j_.is_object(), where_ + ": expected a JSON object");
  }

  ~Reader() = default;
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  [[nodiscard]] const Json* find(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  [[nodiscard]] std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ValidationError(where_ + ": unknown key '" + it.key() + "'");
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

double as_double(const Json& j, const std::string& where) {
  require(j.is_number(), where + ": expected a number");
  return j.get<double>();
}

int as_int(const Json& j, const std::string& where) {
  require(j.is_number_integer(), where + ": expected an integer");
  return j.get<int>();
}

bool as_bool(const Json& j, const std::string& where) {
  require(j.is_boolean(), where + ": expected true/false");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& where) {
  require(j.is_string(), where + ": expected a string");
  return j.get<std::string>();
}

std::uint64_t as_u64(const Json& j, const std::string& where) {
  require(j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0),
          where + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

void read(Reader& r, const char* key, double& out) {
  if (const Json* v = r.find(key)) out = as_double(*v, r.path(key));
}
void read(Reader& r, const char* key, int& out) {
  if (const Json* v = r.find(key)) out = as_int(*v, r.path(key));
}
void read(Reader& r, const char* key, bool& out) {
  if (const Json* v = r.find(key)) out = as_bool(*v, r.path(key));
}
void read(Reader& r, const char* key, std::uint64_t& out) {
  if (const Json* v = r.find(key)) out = as_u64(*v, r.path(key));
}

// Named enumerations.
template <typename E>
E parse_enum(std::string_view s);
template <>
CfaPattern parse_enum<CfaPattern>(std::string_view s) { return parse_cfa_pattern(s); }
template <>
NoiseMode parse_enum<NoiseMode>(std::string_view s) { return parse_noise_mode(s); }
template <>
DemosaicMethod parse_enum<DemosaicMethod>(std::string_view s) { return parse_demosaic_method(s); }
template <>
CurveKind parse_enum<CurveKind>(std::string_view s) { return parse_curve_kind(s); }
template <>
MedianTarget parse_enum<MedianTarget>(std::string_view s) { return parse_median_target(s); }

template <typename E>
void read_enum(Reader& r, const char* key, E& out) {
  if (const Json* v = r.find(key)) out = parse_enum<E>(as_string(*v, r.path(key)));
}

// ---------------------------------------------------------------------------
// PipelineConfig

Json curve_json(const ToneCurve& t) {
  return {{"kind", std::string(to_string(t.kind))}, {"param", t.param}};
}

ToneCurve curve_from(const Json& j, const std::string& where) {
  Reader r(j, where);
  ToneCurve t;
  read_enum(r, "kind", t.kind);
  read(r, "param", t.param);
  r.finish();
  return t;
}

StageToggles stages_from(const Json& j, const std::string& where) {
  Reader r(j, where);
  StageToggles s;
  read(r, "artifacts", s.artifacts);
  read(r, "mosaick", s.mosaick);
  read(r, "demosaic", s.demosaic);
  read(r, "denoise", s.denoise);
  read(r, "postprocess", s.postprocess);
  r.finish();
  return s;
}

Json stages_json(const StageToggles& s) {
  return {{"artifacts", s.artifacts},
          {"mosaick", s.mosaick},
          {"demosaic", s.demosaic},
          {"denoise", s.denoise},
          {"postprocess", s.postprocess}};
}

Json step_json(const DenoiseStep& step) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BilateralStep>) {
          return {{"type", "bilateral"},
                  {"sigma_spatial", s.sigma_spatial},
                  {"sigma_range", s.sigma_range},
                  {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, MedianStep>) {
          return {{"type", "median"}, {"window", s.window}, {"target", std::string(to_string(s.target))}};
        } else {
          return {{"type", "wavelet"}, {"threshold", s.threshold}, {"levels", s.levels}};
        }
      },
      step);
}

DenoiseStep step_from(const Json& j, const std::string& where) {
  Reader r(j, where);
  const Json* type = r.find("type");
  require(type != nullptr, where + ": missing 'type'");
  const std::string t = as_string(*type, r.path("type"));
  DenoiseStep out;
  if (t == "bilateral") {
    BilateralStep s;
    read(r, "sigma_spatial", s.sigma_spatial);
    read(r, "sigma_range", s.sigma_range);
    read(r, "radius", s.radius);
    out = s;
  } else if (t == "median") {
    MedianStep s;
    read(r, "window", s.window);
    read_enum(r, "target", s.target);
    out = s;
  } else if (t == "wavelet") {
    WaveletStep s;
    read(r, "threshold", s.threshold);
    read(r, "levels", s.levels);
    out = s;
  } else {
    throw ValidationError(where + ": unknown denoise step type '" + t + "'");
  }
  r.finish();
  return out;
}

}  // namespace

Json config_to_json(const PipelineConfig& cfg) {
  const auto& a = cfg.artifacts;
  const auto& d = cfg.demosaic;
  Json steps = Json::array();
  for (const auto& s : cfg.denoise.steps) steps.push_back(step_json(s));
  Json j;
  j["seed"] = cfg.seed;
  j["stages"] = stages_json(cfg.stages);
  j["artifacts"] = {
      {"exposure_gain", a.exposure_gain},
      {"blur", {{"length", a.blur.length}, {"angle", a.blur.angle}}},
      {"aberration", {{"red_scale", a.aberration.red_scale}, {"blue_scale", a.aberration.blue_scale}}},
      {"noise",
       {{"gaussian_std", a.noise.gaussian_std},
        {"poisson_mult", a.noise.poisson_mult},
        {"mode", std::string(to_string(a.noise.mode))}}},
      {"pattern", std::string(to_string(a.pattern))},
  };
  j["demosaic"] = {
      {"method", std::string(to_string(d.method))},
      {"white_balance", {{"r", d.white_balance.r}, {"g", d.white_balance.g}, {"b", d.white_balance.b}}},
      {"defect_threshold", d.defect_threshold ? Json(*d.defect_threshold) : Json(nullptr)},
      {"ahd_median_passes", d.ahd_median_passes},
  };
  j["denoise"] = {
      {"pre_tonemap", curve_json(cfg.denoise.pre_tonemap)},
      {"invert_pre_tonemap_after", cfg.denoise.invert_pre_tonemap_after},
      {"steps", steps},
  };
  j["post"] = {
      {"saturation", cfg.post.saturation},
      {"tone_curve", curve_json(cfg.post.tone_curve)},
      {"unsharp",
       {{"amount", cfg.post.unsharp.amount},
        {"radius", cfg.post.unsharp.radius},
        {"threshold", cfg.post.unsharp.threshold}}},
      {"jpeg_quality", cfg.post.jpeg_quality ? Json(*cfg.post.jpeg_quality) : Json(nullptr)},
      {"chroma_subsampling", cfg.post.chroma_subsampling},
  };
  return j;
}

PipelineConfig config_from_json(const Json& j) {
  PipelineConfig cfg;
  Reader r(j, "config");
  read(r, "seed", cfg.seed);
  if (const Json* s = r.find("stages")) cfg.stages = stages_from(*s, "config.stages");
  if (const Json* a = r.find("artifacts")) {
    Reader ar(*a, "config.artifacts");
    read(ar, "exposure_gain", cfg.artifacts.exposure_gain);
    if (const Json* b = ar.find("blur")) {
      Reader br(*b, "config.artifacts.blur");
      read(br, "length", cfg.artifacts.blur.length);
      read(br, "angle", cfg.artifacts.blur.angle);
      br.finish();
    }
    if (const Json* ab = ar.find("aberration")) {
      Reader abr(*ab, "config.artifacts.aberration");
      read(abr, "red_scale", cfg.artifacts.aberration.red_scale);
      read(abr, "blue_scale", cfg.artifacts.aberration.blue_scale);
      abr.finish();
    }
    if (const Json* n = ar.find("noise")) {
      Reader nr(*n, "config.artifacts.noise");
      read(nr, "gaussian_std", cfg.artifacts.noise.gaussian_std);
      read(nr, "poisson_mult", cfg.artifacts.noise.poisson_mult);
      read_enum(nr, "mode", cfg.artifacts.noise.mode);
      nr.finish();
    }
    read_enum(ar, "pattern", cfg.artifacts.pattern);
    ar.finish();
  }
  if (const Json* d = r.find("demosaic")) {
    Reader dr(*d, "config.demosaic");
    read_enum(dr, "method", cfg.demosaic.method);
    if (const Json* wb = dr.find("white_balance")) {
      Reader wr(*wb, "config.demosaic.white_balance");
      read(wr, "r", cfg.demosaic.white_balance.r);
      read(wr, "g", cfg.demosaic.white_balance.g);
      read(wr, "b", cfg.demosaic.white_balance.b);
      wr.finish();
    }
    if (const Json* t = dr.find("defect_threshold")) {
      if (t->is_null()) {
        cfg.demosaic.defect_threshold.reset();
      } else {
        cfg.demosaic.defect_threshold = as_double(*t, "config.demosaic.defect_threshold");
      }
    }
    read(dr, "ahd_median_passes", cfg.demosaic.ahd_median_passes);
    dr.finish();
  }
  if (const Json* d = r.find("denoise")) {
    Reader dr(*d, "config.denoise");
    if (const Json* t = dr.find("pre_tonemap")) cfg.denoise.pre_tonemap = curve_from(*t, "config.denoise.pre_tonemap");
    read(dr, "invert_pre_tonemap_after", cfg.denoise.invert_pre_tonemap_after);
    if (const Json* st = dr.find("steps")) {
      require(st->is_array(), "config.denoise.steps: expected an array");
      cfg.denoise.steps.clear();
      for (std::size_t i = 0; i < st->size(); ++i) {
        cfg.denoise.steps.push_back(step_from((*st)[i], "config.denoise.steps[" + std::to_string(i) + "]"));
      }
    }
    dr.finish();
  }
  if (const Json* p = r.find("post")) {
    Reader pr(*p, "config.post");
    read(pr, "saturation", cfg.post.saturation);
    if (const Json* t = pr.find("tone_curve")) cfg.post.tone_curve = curve_from(*t, "config.post.tone_curve");
    if (const Json* u = pr.find("unsharp")) {
      Reader ur(*u, "config.post.unsharp");
      read(ur, "amount", cfg.post.unsharp.amount);
      read(ur, "radius", cfg.post.unsharp.radius);
      read(ur, "threshold", cfg.post.unsharp.threshold);
      ur.finish();
    }
    if (const Json* q = pr.find("jpeg_quality")) {
      if (q->is_null()) {
        cfg.post.jpeg_quality.reset();
      } else {
        cfg.post.jpeg_quality = as_int(*q, "config.post.jpeg_quality");
      }
    }
    read(pr, "chroma_subsampling", cfg.post.chroma_subsampling);
    pr.finish();
  }
  r.finish();
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// ParamRanges
//   Range:    number (fixed) or [lo, hi]
//   IntRange: integer (fixed) or [lo, hi]
//   Choice:   "name" (single option) or [["name", weight], ...]

namespace {

Json range_json(const Range& r) {
  if (r.is_fixed()) return r.lo;
  return Json::array({r.lo, r.hi});
}

Range range_from(const Json& j, const std::string& where) {
  if (j.is_number()) return Range::fixed(j.get<double>());
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          where + ": expected a number or [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json int_range_json(const IntRange& r) {
  if (r.lo == r.hi) return r.lo;
  return Json::array({r.lo, r.hi});
}

IntRange int_range_from(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return IntRange::fixed(j.get<int>());
  require(j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer(),
          where + ": expected an integer or [lo, hi]");
  return {j[0].get<int>(), j[1].get<int>()};
}

template <typename T>
Json choice_value_json(const T& v) {
  if constexpr (std::is_same_v<T, int>) {
    return v;
  } else {
    return std::string(to_string(v));
  }
}

template <typename T>
T choice_value_from(const Json& j, const std::string& where) {
  if constexpr (std::is_same_v<T, int>) {
    return as_int(j, where);
  } else {
    return parse_enum<T>(as_string(j, where));
  }
}

template <typename T>
Json choice_json(const Choice<T>& c) {
  if (c.options.size() == 1) return choice_value_json(c.options.front().first);
  Json arr = Json::array();
  for (const auto& [v, w] : c.options) arr.push_back(Json::array({choice_value_json(v), w}));
  return arr;
}

template <typename T>
Choice<T> choice_from(const Json& j, const std::string& where) {
  if (!j.is_array()) return Choice<T>::only(choice_value_from<T>(j, where));
  Choice<T> c;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    require(e.is_array() && e.size() == 2, at + ": expected [value, weight]");
    c.options.emplace_back(choice_value_from<T>(e[0], at), as_double(e[1], at));
  }
  return c;
}

void read_range(Reader& r, const char* key, Range& out) {
  if (const Json* v = r.find(key)) out = range_from(*v, r.path(key));
}
void read_range(Reader& r, const char* key, IntRange& out) {
  if (const Json* v = r.find(key)) out = int_range_from(*v, r.path(key));
}
void read_range(Reader& r, const char* key, std::optional<Range>& out) {
  if (const Json* v = r.find(key)) {
    if (v->is_null()) {
      out.reset();
    } else {
      out = range_from(*v, r.path(key));
    }
  }
}
void read_range(Reader& r, const char* key, std::optional<IntRange>& out) {
  if (const Json* v = r.find(key)) {
    if (v->is_null()) {
      out.reset();
    } else {
      out = int_range_from(*v, r.path(key));
    }
  }
}
template <typename T>
void read_choice(Reader& r, const char* key, Choice<T>& out) {
  if (const Json* v = r.find(key)) out = choice_from<T>(*v, r.path(key));
}

Json curve_range_json(const ToneCurveRange& t) {
  return {{"kind", choice_json(t.kind)}, {"gamma", range_json(t.gamma)}, {"strength", range_json(t.strength)}};
}

ToneCurveRange curve_range_from(const Json& j, const std::string& where) {
  Reader r(j, where);
  ToneCurveRange t;
  read_choice(r, "kind", t.kind);
  read_range(r, "gamma", t.gamma);
  read_range(r, "strength", t.strength);
  r.finish();
  return t;
}

Json step_range_json(const DenoiseStepRange& step) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BilateralRange>) {
          return {{"type", "bilateral"},
                  {"sigma_spatial", range_json(s.sigma_spatial)},
                  {"sigma_range", range_json(s.sigma_range)},
                  {"radius", int_range_json(s.radius)}};
        } else if constexpr (std::is_same_v<T, MedianRange>) {
          return {{"type", "median"}, {"window", choice_json(s.window)}, {"target", choice_json(s.target)}};
        } else {
          return {{"type", "wavelet"}, {"threshold", range_json(s.threshold)}, {"levels", int_range_json(s.levels)}};
        }
      },
      step);
}

DenoiseStepRange step_range_from(const Json& j, const std::string& where) {
  Reader r(j, where);
  const Json* type = r.find("type");
  require(type != nullptr, where + ": missing 'type'");
  const std::string t = as_string(*type, r.path("type"));
  DenoiseStepRange out;
  if (t == "bilateral") {
    BilateralRange s;
    read_range(r, "sigma_spatial", s.sigma_spatial);
    read_range(r, "sigma_range", s.sigma_range);
    read_range(r, "radius", s.radius);
    out = s;
  } else if (t == "median") {
    MedianRange s;
    read_choice(r, "window", s.window);
    read_choice(r, "target", s.target);
    out = s;
  } else if (t == "wavelet") {
    WaveletRange s;
    read_range(r, "threshold", s.threshold);
    read_range(r, "levels", s.levels);
    out = s;
  } else {
    throw ValidationError(where + ": unknown denoise step type '" + t + "'");
  }
  r.finish();
  return out;
}

}  // namespace

Json ranges_to_json(const ParamRanges& r) {
  Json steps = Json::array();
  for (const auto& s : r.denoise_steps) steps.push_back(step_range_json(s));
  Json j;
  j["stages"] = stages_json(r.stages);
  j["artifacts"] = {
      {"exposure_gain", range_json(r.exposure_gain)},
      {"blur_length", range_json(r.blur_length)},
      {"blur_angle", range_json(r.blur_angle)},
      {"red_scale", range_json(r.red_scale)},
      {"blue_scale", range_json(r.blue_scale)},
      {"gaussian_std", range_json(r.gaussian_std)},
      {"poisson_mult", range_json(r.poisson_mult)},
      {"noise_mode", choice_json(r.noise_mode)},
      {"pattern", choice_json(r.pattern)},
  };
  j["demosaic"] = {
      {"method", choice_json(r.demosaic_method)},
      {"wb_r", range_json(r.wb_r)},
      {"wb_g", range_json(r.wb_g)},
      {"wb_b", range_json(r.wb_b)},
      {"defect_threshold", r.defect_threshold ? range_json(*r.defect_threshold) : Json(nullptr)},
      {"ahd_median_passes", int_range_json(r.ahd_median_passes)},
  };
  j["denoise"] = {
      {"pre_tonemap", curve_range_json(r.pre_tonemap)},
      {"invert_pre_tonemap_after", r.invert_pre_tonemap_after},
      {"steps", steps},
  };
  j["post"] = {
      {"saturation", range_json(r.saturation)},
      {"tone_curve", curve_range_json(r.tone_curve)},
      {"unsharp_amount", range_json(r.unsharp_amount)},
      {"unsharp_radius", range_json(r.unsharp_radius)},
      {"unsharp_threshold", range_json(r.unsharp_threshold)},
      {"jpeg_quality", r.jpeg_quality ? int_range_json(*r.jpeg_quality) : Json(nullptr)},
      {"chroma_subsampling", r.chroma_subsampling},
  };
  return j;
}

ParamRanges ranges_from_json(const Json& j) {
  ParamRanges out;
  Reader r(j, "ranges");
  if (const Json* s = r.find("stages")) out.stages = stages_from(*s, "ranges.stages");
  if (const Json* a = r.find("artifacts")) {
    Reader ar(*a, "ranges.artifacts");
    read_range(ar, "exposure_gain", out.exposure_gain);
    read_range(ar, "blur_length", out.blur_length);
    read_range(ar, "blur_angle", out.blur_angle);
    read_range(ar, "red_scale", out.red_scale);
    read_range(ar, "blue_scale", out.blue_scale);
    read_range(ar, "gaussian_std", out.gaussian_std);
    read_range(ar, "poisson_mult", out.poisson_mult);
    read_choice(ar, "noise_mode", out.noise_mode);
    read_choice(ar, "pattern", out.pattern);
    ar.finish();
  }
  if (const Json* d = r.find("demosaic")) {
    Reader dr(*d, "ranges.demosaic");
    read_choice(dr, "method", out.demosaic_method);
    read_range(dr, "wb_r", out.wb_r);
    read_range(dr, "wb_g", out.wb_g);
    read_range(dr, "wb_b", out.wb_b);
    read_range(dr, "defect_threshold", out.defect_threshold);
    read_range(dr, "ahd_median_passes", out.ahd_median_passes);
    dr.finish();
  }
  if (const Json* d = r.find("denoise")) {
    Reader dr(*d, "ranges.denoise");
    if (const Json* t = dr.find("pre_tonemap")) out.pre_tonemap = curve_range_from(*t, "ranges.denoise.pre_tonemap");
    read(dr, "invert_pre_tonemap_after", out.invert_pre_tonemap_after);
    if (const Json* st = dr.find("steps")) {
      require(st->is_array(), "ranges.denoise.steps: expected an array");
      out.denoise_steps.clear();
      for (std::size_t i = 0; i < st->size(); ++i) {
        out.denoise_steps.push_back(step_range_from((*st)[i], "ranges.denoise.steps[" + std::to_string(i) + "]"));
      }
    }
    dr.finish();
  }
  if (const Json* p = r.find("post")) {
    Reader pr(*p, "ranges.post");
    read_range(pr, "saturation", out.saturation);
    if (const Json* t = pr.find("tone_curve")) out.tone_curve = curve_range_from(*t, "ranges.post.tone_curve");
    read_range(pr, "unsharp_amount", out.unsharp_amount);
    read_range(pr, "unsharp_radius", out.unsharp_radius);
    read_range(pr, "unsharp_threshold", out.unsharp_threshold);
    read_range(pr, "jpeg_quality", out.jpeg_quality);
    read(pr, "chroma_subsampling", out.chroma_subsampling);
    pr.finish();
  }
  r.finish();
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Fit spaces and results

namespace {

std::string_view to_string(FitFamily f) { return f == FitFamily::tone ? "tone" : "color"; }

FitFamily parse_family(const std::string& s, const std::string& where) {
  if (s == "tone") return FitFamily::tone;
  if (s == "color") return FitFamily::color;
  throw ValidationError(where + ": unknown family '" + s + "' (tone, color)");
}

Json loss_json(const LumaChromaLoss& l) { return {{"luma", l.luma}, {"chroma", l.chroma}}; }

}  // namespace

FitSpace fit_space_from_json(const Json& j) {
  Reader r(j, "fit space");
  FitSpace s;
  if (const Json* b = r.find("base")) s.base = config_from_json(*b);
  const Json* axes = r.find("axes");
  require(axes != nullptr && axes->is_array(), "fit space: 'axes' must be an array");
  for (std::size_t i = 0; i < axes->size(); ++i) {
    const std::string where = "fit space.axes[" + std::to_string(i) + "]";
    Reader ar((*axes)[i], where);
    FitAxis a;
    const Json* p = ar.find("param");
    require(p != nullptr, where + ": missing 'param'");
    a.param = parse_fit_param(as_string(*p, ar.path("param")));
    a.family = default_family(a.param);
    const Json* v = ar.find("values");
    require(v != nullptr && v->is_array(), where + ": 'values' must be an array");
    for (std::size_t k = 0; k < v->size(); ++k) a.values.push_back(as_double((*v)[k], ar.path("values")));
    if (const Json* f = ar.find("family")) a.family = parse_family(as_string(*f, ar.path("family")), where);
    ar.finish();
    s.axes.push_back(std::move(a));
  }
  r.finish();
  s.validate();
  return s;
}

Json fit_space_to_json(const FitSpace& s) {
  Json axes = Json::array();
  for (const auto& a : s.axes) {
    axes.push_back({{"param", std::string(to_string(a.param))},
                    {"values", a.values},
                    {"family", std::string(to_string(a.family))}});
  }
  return {{"base", config_to_json(s.base)}, {"axes", axes}};
}

Json fit_result_to_json(const FitResult& r, const FitSpace& s) {
  Json values = Json::object();
  for (std::size_t k = 0; k < s.axes.size() && k < r.best_values.size(); ++k) {
    values[std::string(to_string(s.axes[k].param))] = r.best_values[k];
  }
  Json j = {
      {"best_values", values},
      {"loss", loss_json(r.loss)},
      {"objective", r.objective},
      {"best_config", config_to_json(r.best_config)},
  };
  if (!r.table.empty()) {
    Json table = Json::array();
    for (const auto& c : r.table) {
      table.push_back({{"values", c.values}, {"loss", loss_json(c.loss)}, {"objective", c.objective}});
    }
    j["table"] = table;
  }
  return j;
}

}  // namespace rawpipe
