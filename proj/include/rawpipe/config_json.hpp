#pragma once

#include "rawpipe/fit.hpp"
#include "rawpipe/pipeline.hpp"

#include <json.hpp>

namespace rawpipe {

using Json = nlohmann::json;

// Strict readers: unknown keys and type mismatches raise ValidationError.
// Missing keys keep the struct defaults.

Json config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const Json& j);

Json ranges_to_json(const ParamRanges& r);
ParamRanges ranges_from_json(const Json& j);

// {"base": config, "axes": [{"param": "saturation", "values": [...], "family": "color"}]}
// "family" is optional and defaults per parameter.
FitSpace fit_space_from_json(const Json& j);
Json fit_space_to_json(const FitSpace& s);
Json fit_result_to_json(const FitResult& r, const FitSpace& s);

}  // namespace rawpipe
