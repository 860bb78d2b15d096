#pragma once

#include <cstddef>
#include <vector>

#include "voxflow/volume.hpp"

namespace voxflow::heatmap {

/// Activations (f, h, w, c) from the layer before global pooling. Any channel count.
struct FeatureVolume {
  std::size_t frames = 1, height = 1, width = 1, channels = 1;
  std::vector<float> data;

  float at(std::size_t f, std::size_t h, std::size_t w, std::size_t c) const noexcept {
    return data[((f * height + h) * width + w) * channels + c];
  }
  void validate() const;
};

/// A single-valued (f, h, w) map.
struct Map3D {
  std::size_t frames = 0, height = 0, width = 0;
  std::vector<float> data;
};

struct ChannelMaps {
  Map3D std, max, mean;
};

/// Per-voxel population std, max and mean over the channel axis.
ChannelMaps reduce_channels(const FeatureVolume& fv);

/// Min-max normalises each map to [0, 255] (a constant map becomes 0) and stacks
/// them as channels (std, max, mean) of a uint8 volume.
Volume to_rgb(const Map3D& std_map, const Map3D& max_map, const Map3D& mean_map);
inline Volume to_rgb(const ChannelMaps& m) { return to_rgb(m.std, m.max, m.mean); }

/// Nearest-neighbour upscale of every spatial axis by `factor`.
Volume upscale(const Volume& hm, std::size_t factor);

/// Upscales the heatmap by `factor`, crops to the input extents, and blends
/// alpha*heatmap + (1-alpha)*input per voxel (grayscale input replicated to 3
/// channels). Requires ceil(input extent / factor) == heatmap extent per axis,
/// else ShapeIncompatible.
Volume upscale_overlay(const Volume& hm, const Volume& input, std::size_t factor = 32, double alpha = 0.5);

}  // namespace voxflow::heatmap
