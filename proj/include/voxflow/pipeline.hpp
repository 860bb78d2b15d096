#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "voxflow/transforms.hpp"
#include "voxflow/volume.hpp"

namespace voxflow {

/// Transform identifiers as they appear in pipeline JSON.
enum class TransformId {
  RotateSmall,
  Elastic,
  Rotate90,
  Flip,
  GridDropout,
  GaussianNoise,
  RandomGamma,
  CropFromBorders,
  DropPlane,
  Resize,
};

std::string_view transform_name(TransformId id) noexcept;

struct Rotate90Params {
  friend bool operator==(const Rotate90Params&, const Rotate90Params&) = default;
};

using TransformParams =
    std::variant<transforms::RotateSmallParams, transforms::ElasticParams, Rotate90Params,
                 transforms::FlipParams, transforms::GridDropoutParams,
                 transforms::GaussianNoiseParams, transforms::GammaParams,
                 transforms::BorderCropParams, transforms::DropPlaneParams, transforms::ResizeParams>;

struct PipelineStep {
  TransformParams params;
  double p = 1.0;

  TransformId id() const noexcept { return static_cast<TransformId>(params.index()); }
};

bool operator==(const PipelineStep& a, const PipelineStep& b);

/// Ordered, probability-gated transform steps plus the global seed.
///
/// Sample `i` uses stream child(seed, i); step `k` of that sample uses
/// child(sample stream, k). The first draw of a step stream gates the step,
/// the remaining draws feed the transform, so inserting or removing a step
/// never shifts the randomness of the others.
class Pipeline {
 public:
  Pipeline(std::vector<PipelineStep> steps, std::uint64_t seed);

  const std::vector<PipelineStep>& steps() const noexcept { return steps_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Pipeline with_seed(std::uint64_t seed) const { return Pipeline(steps_, seed); }

  friend bool operator==(const Pipeline&, const Pipeline&) = default;

 private:
  std::vector<PipelineStep> steps_;
  std::uint64_t seed_;
};

struct AppliedPipeline {
  Volume volume;
  std::vector<std::size_t> fired;  // indices of steps that fired, in order
};

AppliedPipeline apply_traced(const Pipeline& pipe, const Volume& v, std::uint64_t sample_index);
Volume apply(const Pipeline& pipe, const Volume& v, std::uint64_t sample_index);

/// Runs one transform with its own stream (no gating).
Volume apply_step(const TransformParams& params, const Volume& v, RandomStream& rng);

/// The ten-step "heavy augs" protocol ending in a mandatory resize.
Pipeline preset_heavy_augs(std::array<std::size_t, 3> target, std::uint64_t seed = 0);
/// Independent per-axis mirroring followed by resize.
Pipeline preset_mirror3(std::array<std::size_t, 3> target, std::uint64_t seed = 0);

/// Pipeline JSON: {"seed": u64, "steps": [{"op": str, "p": num, "params": {...}}]}.
std::string serialize(const Pipeline& pipe);
/// Throws SchemaError naming the step index and field, or JsonMalformed.
Pipeline parse_pipeline(std::string_view text);

}  // namespace voxflow
