#include "voxflow/roi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace voxflow::roi {

void ColorRule::validate() const {
  auto in = [](double x, double lo, double hi) { return x >= lo && x <= hi; };
  if (!(hue_lo >= 0.0 && hue_lo < 360.0 && hue_hi >= 0.0 && hue_hi < 360.0) || !in(sat_min, 0, 1) || !in(val_min, 0, 1))
    throw Error(ErrorCode::InvalidArgument, "colour rule: hue must lie in [0, 360), thresholds in [0, 1]");
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) noexcept {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double d = mx - mn;
  double h = 0.0;
  if (d > 0.0) {
    if (mx == r)
      h = 60.0 * std::fmod((g - b) / d, 6.0);
    else if (mx == g)
      h = 60.0 * ((b - r) / d + 2.0);
    else
      h = 60.0 * ((r - g) / d + 4.0);
    if (h < 0.0) h += 360.0;
  }
  return {h, mx > 0.0 ? d / mx : 0.0, mx};
}

bool matches(const ColorRule& rule, std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const Hsv c = rgb_to_hsv(r, g, b);
  if (c.s < rule.sat_min || c.v < rule.val_min || c.s == 0.0) return false;
  if (rule.hue_lo <= rule.hue_hi) return c.h >= rule.hue_lo && c.h <= rule.hue_hi;
  return c.h >= rule.hue_lo || c.h <= rule.hue_hi;
}

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

namespace {

void require_rgb(const Volume& v) {
  if (v.dtype() != DType::UInt8 || v.shape().channels != 3)
    throw Error(ErrorCode::NotRGB, "expected 8-bit RGB frames, got " + std::string(dtype_name(v.dtype())) + " with " +
                                       std::to_string(v.shape().channels) + " channel(s)");
}

}  // namespace

Mask orange_mask(const Volume& frames, std::size_t frame, const ColorRule& rule) {
  require_rgb(frames);
  rule.validate();
  const Shape& s = frames.shape();
  if (frame >= s.frames) throw Error(ErrorCode::RegionOutOfBounds, "frame index out of range");
  Mask m{s.height, s.width, std::vector<std::uint8_t>(s.height * s.width)};
  const auto px = frames.values<std::uint8_t>().subspan(frames.offset(frame, 0, 0), s.height * s.width * 3);
  for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = matches(rule, px[3 * i], px[3 * i + 1], px[3 * i + 2]);
  return m;
}

Cuboid roi_cuboid(const Volume& frames, const ColorRule& rule, std::size_t pad) {
  require_rgb(frames);
  const Shape& s = frames.shape();
  std::size_t r_min = std::numeric_limits<std::size_t>::max(), r_max = 0;
  std::size_t c_min = std::numeric_limits<std::size_t>::max(), c_max = 0;
  bool found = false;
  for (std::size_t f = 0; f < s.frames; ++f) {
    const Mask m = orange_mask(frames, f, rule);
    for (std::size_t r = 0; r < s.height; ++r)
      for (std::size_t c = 0; c < s.width; ++c) {
        if (!m.at(r, c)) continue;
        found = true;
        r_min = std::min(r_min, r), r_max = std::max(r_max, r);
        c_min = std::min(c_min, c), c_max = std::max(c_max, c);
      }
  }
  if (!found) throw Error(ErrorCode::NoContourFound, "no pixel matches the annotation colour rule");
  return Cuboid{0,
                s.frames,
                r_min > pad ? r_min - pad : 0,
                std::min(s.height, r_max + 1 + pad),
                c_min > pad ? c_min - pad : 0,
                std::min(s.width, c_max + 1 + pad)};
}

namespace {

double percentile(const std::vector<std::size_t>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) + t * (static_cast<double>(sorted[hi]) - static_cast<double>(sorted[lo]));
}

AxisStats axis_stats(std::vector<std::size_t> sizes, std::size_t bin_width) {
  std::sort(sizes.begin(), sizes.end());
  AxisStats a;
  const double n = static_cast<double>(sizes.size());
  double sum = 0.0;
  for (auto x : sizes) sum += static_cast<double>(x);
  a.mean = sum / n;
  double ss = 0.0;
  for (auto x : sizes) ss += (static_cast<double>(x) - a.mean) * (static_cast<double>(x) - a.mean);
  a.variance = ss / n;
  a.min = sizes.front();
  a.max = sizes.back();
  a.p05 = percentile(sizes, 0.05);
  a.p25 = percentile(sizes, 0.25);
  a.p50 = percentile(sizes, 0.50);
  a.p75 = percentile(sizes, 0.75);
  a.p95 = percentile(sizes, 0.95);
  const std::size_t first = (a.min / bin_width) * bin_width;
  for (std::size_t lo = first; lo <= a.max; lo += bin_width) a.histogram.push_back({lo, lo + bin_width, 0});
  for (auto x : sizes) a.histogram[(x - first) / bin_width].count++;
  return a;
}

}  // namespace

RoiSummary roi_stats(const std::vector<Cuboid>& cuboids, std::size_t bin_width) {
  if (cuboids.empty()) throw Error(ErrorCode::EmptySet, "roi_stats needs at least one cuboid");
  if (bin_width == 0) throw Error(ErrorCode::InvalidArgument, "histogram bin width must be >= 1");
  std::vector<std::size_t> f, r, c;
  for (const auto& q : cuboids) {
    f.push_back(q.frames());
    r.push_back(q.rows());
    c.push_back(q.cols());
  }
  return RoiSummary{cuboids.size(), axis_stats(f, bin_width), axis_stats(r, bin_width), axis_stats(c, bin_width)};
}

std::string histogram_csv(const RoiSummary& s) {
  std::string out = "axis,bin_lo,bin_hi,count\n";
  const std::pair<const char*, const AxisStats*> axes[] = {{"frames", &s.frames}, {"rows", &s.rows}, {"cols", &s.cols}};
  for (const auto& [name, a] : axes)
    for (const auto& b : a->histogram)
      out += std::string(name) + "," + std::to_string(b.lo) + "," + std::to_string(b.hi) + "," + std::to_string(b.count) + "\n";
  return out;
}

}  // namespace voxflow::roi
