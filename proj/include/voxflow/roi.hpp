#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "voxflow/volume.hpp"

namespace voxflow::roi {

/// HSV acceptance window over 8-bit RGB. Hue in degrees; a window with
/// hue_lo > hue_hi wraps through 0.
struct ColorRule {
  double hue_lo = 10.0;
  double hue_hi = 45.0;
  double sat_min = 0.45;
  double val_min = 0.30;

  void validate() const;
};

struct Hsv {
  double h, s, v;  // h in [0, 360), s and v in [0, 1]
};
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
bool matches(const ColorRule& rule, std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

struct Mask {
  std::size_t height = 0, width = 0;
  std::vector<std::uint8_t> bits;  // row-major, 0 or 1

  bool at(std::size_t r, std::size_t c) const noexcept { return bits[r * width + c] != 0; }
  std::size_t count() const noexcept;
  friend bool operator==(const Mask&, const Mask&) = default;
};

/// Annotation-colour mask of one frame. Throws NotRGB unless the volume is uint8 with 3 channels.
Mask orange_mask(const Volume& frames, std::size_t frame, const ColorRule& rule = {});

/// Bounding box of the union of all frame masks, padded by `pad` and clamped
/// to the frame. Covers every frame. Throws NoContourFound.
Cuboid roi_cuboid(const Volume& frames, const ColorRule& rule = {}, std::size_t pad = 8);

struct HistogramBin {
  std::size_t lo, hi;  // [lo, hi)
  std::size_t count;
};

struct AxisStats {
  double mean = 0.0;
  double variance = 0.0;  // population
  std::size_t min = 0, max = 0;
  double p05 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p95 = 0.0;
  std::vector<HistogramBin> histogram;
};

struct RoiSummary {
  std::size_t count = 0;
  AxisStats frames, rows, cols;
};

/// Per-axis size statistics. Percentiles interpolate linearly between order
/// statistics. Histogram bins start at a multiple of bin_width.
RoiSummary roi_stats(const std::vector<Cuboid>& cuboids, std::size_t bin_width = 4);

/// CSV with header axis,bin_lo,bin_hi,count.
std::string histogram_csv(const RoiSummary& s);

}  // namespace voxflow::roi
