#include "voxflow/heatmap.hpp"

#include <algorithm>
#include <cmath>

namespace voxflow::heatmap {

void FeatureVolume::validate() const {
  if (frames == 0 || height == 0 || width == 0 || channels == 0)
    throw Error(ErrorCode::InvalidVolume, "feature volume extents must be >= 1");
  if (data.size() != frames * height * width * channels)
    throw Error(ErrorCode::InvalidVolume, "feature volume buffer does not match its shape");
  if (!std::all_of(data.begin(), data.end(), [](float x) { return std::isfinite(x); }))
    throw Error(ErrorCode::InvalidVolume, "feature volume contains non-finite values");
}

ChannelMaps reduce_channels(const FeatureVolume& fv) {
  fv.validate();
  const std::size_t n = fv.frames * fv.height * fv.width, C = fv.channels;
  ChannelMaps m;
  for (Map3D* map : {&m.std, &m.max, &m.mean}) *map = Map3D{fv.frames, fv.height, fv.width, std::vector<float>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const float* x = fv.data.data() + i * C;
    double sum = 0.0;
    float mx = x[0];
    for (std::size_t c = 0; c < C; ++c) {
      sum += x[c];
      mx = std::max(mx, x[c]);
    }
    const double mean = sum / static_cast<double>(C);
    double ss = 0.0;
    for (std::size_t c = 0; c < C; ++c) ss += (x[c] - mean) * (x[c] - mean);
    m.std.data[i] = C == 1 ? 0.0f : static_cast<float>(std::sqrt(ss / static_cast<double>(C)));
    m.max.data[i] = mx;
    m.mean.data[i] = static_cast<float>(mean);
  }
  return m;
}

Volume to_rgb(const Map3D& std_map, const Map3D& max_map, const Map3D& mean_map) {
  auto same = [](const Map3D& a, const Map3D& b) {
    return a.frames == b.frames && a.height == b.height && a.width == b.width && a.data.size() == b.data.size();
  };
  if (!same(std_map, max_map) || !same(std_map, mean_map))
    throw Error(ErrorCode::ShapeMismatch, "heatmap channel maps must share one shape");
  const Shape shape{std_map.frames, std_map.height, std_map.width, 3};
  Volume out(shape, DType::UInt8);
  auto px = out.values<std::uint8_t>();
  const Map3D* maps[3] = {&std_map, &max_map, &mean_map};
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const auto& d = maps[ch]->data;
    const auto [mn, mx] = std::minmax_element(d.begin(), d.end());
    const double lo = *mn, range = static_cast<double>(*mx) - lo;
    for (std::size_t i = 0; i < d.size(); ++i)
      px[i * 3 + ch] = range > 0.0 ? saturate_u8((static_cast<double>(d[i]) - lo) / range * 255.0) : 0;
  }
  return out;
}

Volume upscale(const Volume& hm, std::size_t factor) {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "upscale factor must be >= 1");
  const Shape& s = hm.shape();
  const Shape out_shape{s.frames * factor, s.height * factor, s.width * factor, s.channels};
  Volume out(out_shape, hm.dtype());
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    const auto src = hm.values<T>();
    std::size_t o = 0;
    for (std::size_t f = 0; f < out_shape.frames; ++f)
      for (std::size_t h = 0; h < out_shape.height; ++h)
        for (std::size_t w = 0; w < out_shape.width; ++w)
          for (std::size_t c = 0; c < s.channels; ++c) dst[o++] = src[hm.offset(f / factor, h / factor, w / factor, c)];
  });
  return out;
}

Volume upscale_overlay(const Volume& hm, const Volume& input, std::size_t factor, double alpha) {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "upscale factor must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be in [0, 1]");
  if (hm.dtype() != DType::UInt8 || hm.shape().channels != 3)
    throw Error(ErrorCode::ShapeIncompatible, "heatmap must be a uint8 RGB volume");
  const Shape& hs = hm.shape();
  const Shape& is = input.shape();
  for (Axis a : kSpatialAxes) {
    if ((is.extent(a) + factor - 1) / factor != hs.extent(a))
      throw Error(ErrorCode::ShapeIncompatible, "input " + to_string(is) + " does not reduce to heatmap " + to_string(hs) +
                                                    " with factor " + std::to_string(factor));
  }
  const Volume in8 = cast(input, DType::UInt8);
  const auto src = in8.values<std::uint8_t>();
  const auto heat = hm.values<std::uint8_t>();
  Volume out(Shape{is.frames, is.height, is.width, 3}, DType::UInt8);
  auto dst = out.values<std::uint8_t>();
  const double beta = 1.0 - alpha;
  const std::size_t C = is.channels;
  std::size_t o = 0;
  for (std::size_t f = 0; f < is.frames; ++f)
    for (std::size_t h = 0; h < is.height; ++h) {
      const std::size_t hrow = hm.offset(f / factor, h / factor, 0);
      for (std::size_t w = 0; w < is.width; ++w) {
        const std::uint8_t* hp = heat.data() + hrow + (w / factor) * 3;
        const std::uint8_t* ip = src.data() + in8.offset(f, h, w);
        for (std::size_t c = 0; c < 3; ++c) dst[o++] = saturate_u8(alpha * hp[c] + beta * ip[C == 1 ? 0 : c]);
      }
    }
  return out;
}

}  // namespace voxflow::heatmap
