#include "voxflow/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include "json.hpp"

namespace voxflow {

namespace t = transforms;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 10> kNames = {
    "rotate_small", "elastic",           "rotate90",   "flip",  "grid_dropout",
    "gaussian_noise", "random_gamma", "crop_from_borders", "drop_plane", "resize",
};

[[noreturn]] void schema_error(std::size_t step, const std::string& field, const std::string& what) {
  throw Error(ErrorCode::SchemaError, "step " + std::to_string(step) + ", field '" + field + "': " + what);
}

std::string_view mode_name(t::Interpolation m) { return m == t::Interpolation::Nearest ? "nearest" : "trilinear"; }

/// Reads typed, range-checked fields out of a step's params object and rejects leftovers.
class ParamReader {
 public:
  ParamReader(const ordered_json& obj, std::size_t step) : obj_(obj), step_(step) {
    if (!obj_.is_object()) schema_error(step_, "params", "must be an object");
  }

  double real(const char* key, double def, double lo, double hi, bool lo_open = false) {
    const auto* v = find(key);
    if (!v) return def;
    if (!v->is_number()) schema_error(step_, key, "must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x) || x > hi || x < lo || (lo_open && x == lo))
      schema_error(step_, key, "value " + v->dump() + " out of range");
    return x;
  }

  std::size_t count(const char* key, std::size_t def, std::size_t lo) {
    const auto* v = find(key);
    if (!v) return def;
    if (!v->is_number_unsigned()) schema_error(step_, key, "must be a non-negative integer");
    const auto x = v->get<std::uint64_t>();
    if (x < lo) schema_error(step_, key, "must be >= " + std::to_string(lo));
    return static_cast<std::size_t>(x);
  }

  const ordered_json* find(const char* key) {
    seen_.push_back(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [k, _] : obj_.items()) {
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) schema_error(step_, k, "unknown parameter");
    }
  }

 private:
  const ordered_json& obj_;
  std::size_t step_;
  std::vector<std::string> seen_;
};

TransformParams parse_params(TransformId id, const ordered_json& obj, std::size_t step) {
  ParamReader r(obj, step);
  TransformParams out;
  switch (id) {
    case TransformId::RotateSmall:
      out = t::RotateSmallParams{r.real("max_deg", 10.0, 0.0, 45.0, true)};
      break;
    case TransformId::Elastic: {
      t::ElasticParams p;
      p.grid = r.count("grid", 4, 2);
      p.sigma = r.real("sigma", 6.0, 0.0, 1e6);
      out = p;
      break;
    }
    case TransformId::Rotate90:
      out = Rotate90Params{};
      break;
    case TransformId::Flip:
      out = t::FlipParams{r.real("p_axis", 0.5, 0.0, 1.0)};
      break;
    case TransformId::GridDropout: {
      t::GridDropoutParams p;
      p.cell = r.count("cell", 16, 2);
      p.ratio = r.real("ratio", 0.5, 0.0, 1.0);
      out = p;
      break;
    }
    case TransformId::GaussianNoise:
      out = t::GaussianNoiseParams{r.real("sigma_max", 10.0, 0.0, 1e6)};
      break;
    case TransformId::RandomGamma: {
      t::GammaParams p;
      p.lo = r.real("lo", 0.8, 0.0, 1e6, true);
      p.hi = r.real("hi", 1.2, 0.0, 1e6, true);
      if (p.lo > p.hi) schema_error(step, "hi", "must be >= lo");
      out = p;
      break;
    }
    case TransformId::CropFromBorders:
      out = t::BorderCropParams{r.real("max_frac", 0.1, 0.0, 0.5)};
      if (std::get<t::BorderCropParams>(out).max_frac >= 0.5) schema_error(step, "max_frac", "must be < 0.5");
      break;
    case TransformId::DropPlane:
      out = t::DropPlaneParams{r.real("max_frac", 0.1, 0.0, 0.5)};
      if (std::get<t::DropPlaneParams>(out).max_frac >= 0.5) schema_error(step, "max_frac", "must be < 0.5");
      break;
    case TransformId::Resize: {
      t::ResizeParams p;
      const auto* target = r.find("target");
      if (!target) schema_error(step, "target", "required");
      if (!target->is_array() || target->size() != 3) schema_error(step, "target", "must be [F, H, W]");
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& e = (*target)[i];
        if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0) schema_error(step, "target", "extents must be integers >= 1");
        p.target[i] = e.get<std::size_t>();
      }
      if (const auto* mode = r.find("mode")) {
        if (*mode == "nearest")
          p.mode = t::Interpolation::Nearest;
        else if (*mode == "trilinear")
          p.mode = t::Interpolation::Trilinear;
        else
          schema_error(step, "mode", "must be \"nearest\" or \"trilinear\"");
      }
      out = p;
      break;
    }
  }
  r.finish();
  return out;
}

ordered_json params_json(const TransformParams& params) {
  return std::visit([](const auto& p) -> ordered_json {
    using P = std::decay_t<decltype(p)>;
    ordered_json j = ordered_json::object();
    if constexpr (std::is_same_v<P, t::RotateSmallParams>) {
      j["max_deg"] = p.max_deg;
    } else if constexpr (std::is_same_v<P, t::ElasticParams>) {
      j["grid"] = p.grid;
      j["sigma"] = p.sigma;
    } else if constexpr (std::is_same_v<P, t::FlipParams>) {
      j["p_axis"] = p.p_axis;
    } else if constexpr (std::is_same_v<P, t::GridDropoutParams>) {
      j["cell"] = p.cell;
      j["ratio"] = p.ratio;
    } else if constexpr (std::is_same_v<P, t::GaussianNoiseParams>) {
      j["sigma_max"] = p.sigma_max;
    } else if constexpr (std::is_same_v<P, t::GammaParams>) {
      j["lo"] = p.lo;
      j["hi"] = p.hi;
    } else if constexpr (std::is_same_v<P, t::BorderCropParams> || std::is_same_v<P, t::DropPlaneParams>) {
      j["max_frac"] = p.max_frac;
    } else if constexpr (std::is_same_v<P, t::ResizeParams>) {
      j["target"] = p.target;
      j["mode"] = mode_name(p.mode);
    }
    return j;
  }, params);
}

}  // namespace

std::string_view transform_name(TransformId id) noexcept { return kNames[static_cast<std::size_t>(id)]; }

bool operator==(const PipelineStep& a, const PipelineStep& b) {
  if (a.p != b.p || a.params.index() != b.params.index()) return false;
  return std::visit([&](const auto& pa) {
    using P = std::decay_t<decltype(pa)>;
    const auto& pb = std::get<P>(b.params);
    return params_json(TransformParams{pa}) == params_json(TransformParams{pb});
  }, a.params);
}

Pipeline::Pipeline(std::vector<PipelineStep> steps, std::uint64_t seed) : steps_(std::move(steps)), seed_(seed) {
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const double p = steps_[i].p;
    if (!(p >= 0.0 && p <= 1.0)) schema_error(i, "p", "probability must be in [0, 1]");
  }
}

Volume apply_step(const TransformParams& params, const Volume& v, RandomStream& rng) {
  return std::visit([&](const auto& p) -> Volume {
    using P = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<P, t::RotateSmallParams>) return t::rotate_small(v, rng, p);
    else if constexpr (std::is_same_v<P, t::ElasticParams>) return t::elastic(v, rng, p);
    else if constexpr (std::is_same_v<P, Rotate90Params>) return t::rotate90(v, rng);
    else if constexpr (std::is_same_v<P, t::FlipParams>) return t::flip(v, rng, p);
    else if constexpr (std::is_same_v<P, t::GridDropoutParams>) return t::grid_dropout(v, rng, p);
    else if constexpr (std::is_same_v<P, t::GaussianNoiseParams>) return t::gaussian_noise(v, rng, p);
    else if constexpr (std::is_same_v<P, t::GammaParams>) return t::random_gamma(v, rng, p);
    else if constexpr (std::is_same_v<P, t::BorderCropParams>) return t::crop_from_borders(v, rng, p);
    else if constexpr (std::is_same_v<P, t::DropPlaneParams>) return t::drop_plane(v, rng, p);
    else return t::resize(v, p);
  }, params);
}

AppliedPipeline apply_traced(const Pipeline& pipe, const Volume& v, std::uint64_t sample_index) {
  const RandomStream sample = RandomStream(pipe.seed()).child(sample_index);
  AppliedPipeline result{v, {}};
  const auto& steps = pipe.steps();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    RandomStream rng = sample.child(k);
    if (!(rng.uniform() < steps[k].p)) continue;
    try {
      result.volume = apply_step(steps[k].params, result.volume, rng);
    } catch (const Error& e) {
      throw e.with_context("step " + std::to_string(k) + " (" + std::string(transform_name(steps[k].id())) + ")");
    }
    result.fired.push_back(k);
  }
  return result;
}

Volume apply(const Pipeline& pipe, const Volume& v, std::uint64_t sample_index) {
  return apply_traced(pipe, v, sample_index).volume;
}

Pipeline preset_heavy_augs(std::array<std::size_t, 3> target, std::uint64_t seed) {
  t::ResizeParams resize;
  resize.target = target;
  // Rotation by 90 degrees has no listed probability; it always draws, and k=0 leaves the volume as is.
  return Pipeline({
      {t::RotateSmallParams{}, 0.3},
      {t::ElasticParams{}, 0.1},
      {Rotate90Params{}, 1.0},
      {t::FlipParams{}, 0.5},
      {t::GridDropoutParams{}, 0.1},
      {t::GaussianNoiseParams{}, 0.2},
      {t::GammaParams{}, 0.2},
      {t::BorderCropParams{}, 0.4},
      {t::DropPlaneParams{}, 0.5},
      {resize, 1.0},
  }, seed);
}

Pipeline preset_mirror3(std::array<std::size_t, 3> target, std::uint64_t seed) {
  t::ResizeParams resize;
  resize.target = target;
  return Pipeline({{t::FlipParams{0.5}, 1.0}, {resize, 1.0}}, seed);
}

std::string serialize(const Pipeline& pipe) {
  ordered_json j;
  j["seed"] = pipe.seed();
  j["steps"] = ordered_json::array();
  for (const auto& step : pipe.steps()) {
    ordered_json s;
    s["op"] = transform_name(step.id());
    s["p"] = step.p;
    s["params"] = params_json(step.params);
    j["steps"].push_back(std::move(s));
  }
  return j.dump(2) + "\n";
}

Pipeline parse_pipeline(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "pipeline must be a JSON object");
  for (const auto& [k, _] : j.items())
    if (k != "seed" && k != "steps") throw Error(ErrorCode::SchemaError, "unknown top-level field '" + k + "'");
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error(ErrorCode::SchemaError, "field 'seed' must be an unsigned integer");
    seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("steps") || !j["steps"].is_array()) throw Error(ErrorCode::SchemaError, "field 'steps' must be an array");
  std::vector<PipelineStep> steps;
  const auto& arr = j["steps"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& s = arr[i];
    if (!s.is_object()) schema_error(i, "step", "must be an object");
    for (const auto& [k, _] : s.items())
      if (k != "op" && k != "p" && k != "params") schema_error(i, k, "unknown field");
    if (!s.contains("op") || !s["op"].is_string()) schema_error(i, "op", "required string");
    const auto op = s["op"].get<std::string>();
    const auto it = std::find(kNames.begin(), kNames.end(), op);
    if (it == kNames.end()) schema_error(i, "op", "unknown transform id '" + op + "'");
    const auto id = static_cast<TransformId>(it - kNames.begin());
    double p = 1.0;
    if (s.contains("p")) {
      if (!s["p"].is_number()) schema_error(i, "p", "must be a number");
      p = s["p"].get<double>();
      if (!(p >= 0.0 && p <= 1.0)) schema_error(i, "p", "probability " + s["p"].dump() + " outside [0, 1]");
    }
    const ordered_json params = s.contains("params") ? s["params"] : ordered_json::object();
    steps.push_back({parse_params(id, params, i), p});
  }
  return Pipeline(std::move(steps), seed);
}

}  // namespace voxflow
