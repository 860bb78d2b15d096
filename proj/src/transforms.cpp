#include "voxflow/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace voxflow::transforms {

namespace {

template <class T>
inline T store(double x) noexcept {
  if constexpr (std::is_same_v<T, std::uint8_t>)
    return saturate_u8(x);
  else
    return static_cast<float>(x);
}

inline float lerp(float a, float b, float t) noexcept { return a + t * (b - a); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

std::array<std::ptrdiff_t, 3> voxel_strides(const Shape& s) {
  return {static_cast<std::ptrdiff_t>(s.height * s.width), static_cast<std::ptrdiff_t>(s.width), 1};
}

/// Output voxel (f,h,w) reads input voxel base + f*strides[0] + h*strides[1] + w*strides[2].
Volume strided_copy(const Volume& v, Shape out_shape, std::ptrdiff_t base,
                    std::array<std::ptrdiff_t, 3> strides) {
  Volume out(out_shape, v.dtype());
  const std::size_t C = v.shape().channels;
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    const T* src = v.values<T>().data();
    T* o = dst.data();
    for (std::size_t f = 0; f < out_shape.frames; ++f) {
      for (std::size_t h = 0; h < out_shape.height; ++h) {
        std::ptrdiff_t i = base + static_cast<std::ptrdiff_t>(f) * strides[0] +
                           static_cast<std::ptrdiff_t>(h) * strides[1];
        if (C == 1) {
          for (std::size_t w = 0; w < out_shape.width; ++w, i += strides[2]) *o++ = src[i];
        } else {
          for (std::size_t w = 0; w < out_shape.width; ++w, i += strides[2]) {
            const T* p = src + i * 3;
            *o++ = p[0];
            *o++ = p[1];
            *o++ = p[2];
          }
        }
      }
    }
  });
  return out;
}

/// Keeps only the listed planes of an axis, in the listed order.
Volume gather_axis(const Volume& v, Axis axis, const std::vector<std::size_t>& keep) {
  Shape out_shape = v.shape();
  out_shape.extent(axis) = keep.size();
  Volume out(out_shape, v.dtype());
  const Shape& s = v.shape();
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    const auto src = v.values<T>();
    std::size_t o = 0;
    auto copy_run = [&](std::size_t start, std::size_t len) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(start), len,
                  dst.begin() + static_cast<std::ptrdiff_t>(o));
      o += len;
    };
    const std::size_t C = s.channels;
    switch (axis) {
      case Axis::Frames:
        for (std::size_t f : keep) copy_run(v.offset(f, 0, 0), s.height * s.width * C);
        break;
      case Axis::Height:
        for (std::size_t f = 0; f < s.frames; ++f)
          for (std::size_t h : keep) copy_run(v.offset(f, h, 0), s.width * C);
        break;
      case Axis::Width:
        for (std::size_t f = 0; f < s.frames; ++f)
          for (std::size_t h = 0; h < s.height; ++h)
            for (std::size_t w : keep) copy_run(v.offset(f, h, w), C);
        break;
    }
  });
  return out;
}

std::vector<float> to_float_buffer(const Volume& v) {
  return v.visit([](auto vals) { return std::vector<float>(vals.begin(), vals.end()); });
}

Volume from_float_buffer(const Shape& shape, DType dtype, const std::vector<float>& buf) {
  Volume out(shape, dtype);
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    std::transform(buf.begin(), buf.end(), dst.begin(), [](float x) { return store<T>(x); });
  });
  return out;
}

struct Tap {
  std::size_t i0, i1;
  float t;
};

/// Half-pixel-centre mapping with edge clamp.
std::vector<Tap> linear_taps(std::size_t in, std::size_t out) {
  std::vector<Tap> taps(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (std::size_t x = 0; x < out; ++x) {
    double src = (static_cast<double>(x) + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in - 1));
    const auto i0 = static_cast<std::size_t>(std::floor(src));
    taps[x] = Tap{i0, std::min(i0 + 1, in - 1), static_cast<float>(src - static_cast<double>(i0))};
  }
  return taps;
}

std::vector<std::size_t> nearest_index(std::size_t in, std::size_t out) {
  std::vector<std::size_t> idx(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (std::size_t x = 0; x < out; ++x) {
    const auto i = static_cast<std::size_t>(std::floor((static_cast<double>(x) + 0.5) * scale));
    idx[x] = std::min(i, in - 1);
  }
  return idx;
}

/// One separable linear pass along an axis of a float (F,H,W,C) buffer.
std::vector<float> linear_pass(const std::vector<float>& in, Shape& shape, Axis axis, std::size_t target) {
  const std::size_t n_in = shape.extent(axis);
  const auto taps = linear_taps(n_in, target);
  // View the buffer as (outer, n, inner).
  std::size_t outer = 1, inner = shape.channels;
  switch (axis) {
    case Axis::Frames: inner *= shape.height * shape.width; break;
    case Axis::Height: outer = shape.frames; inner *= shape.width; break;
    case Axis::Width: outer = shape.frames * shape.height; break;
  }
  std::vector<float> out(outer * target * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    const float* src = in.data() + o * n_in * inner;
    float* dst = out.data() + o * target * inner;
    for (std::size_t x = 0; x < target; ++x) {
      const Tap& tp = taps[x];
      const float* a = src + tp.i0 * inner;
      const float* b = src + tp.i1 * inner;
      float* d = dst + x * inner;
      for (std::size_t k = 0; k < inner; ++k) d[k] = lerp(a[k], b[k], tp.t);
    }
  }
  shape.extent(axis) = target;
  return out;
}

struct PlaneAxes {
  Axis a, b;
};

PlaneAxes plane_axes(Plane p) {
  switch (p) {
    case Plane::HW: return {Axis::Height, Axis::Width};
    case Plane::FH: return {Axis::Frames, Axis::Height};
    case Plane::FW: return {Axis::Frames, Axis::Width};
  }
  return {Axis::Height, Axis::Width};
}

}  // namespace

// ---------------------------------------------------------------------------

Volume rotate_plane(const Volume& v, double degrees) {
  const Shape& s = v.shape();
  const std::size_t H = s.height, W = s.width, C = s.channels;
  const double theta = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(theta), sn = std::sin(theta);
  const double cy = (static_cast<double>(H) - 1.0) / 2.0;
  const double cx = (static_cast<double>(W) - 1.0) / 2.0;

  // Bilinear taps per output pixel, shared by every frame; out-of-plane taps are dropped (zero fill).
  struct PixelTaps {
    std::array<std::ptrdiff_t, 4> idx;
    std::array<float, 4> w;
  };
  std::vector<PixelTaps> taps(H * W);
  for (std::size_t r = 0; r < H; ++r) {
    for (std::size_t c = 0; c < W; ++c) {
      const double dy = static_cast<double>(r) - cy;
      const double dx = static_cast<double>(c) - cx;
      const double sy = cy - sn * dx + cs * dy;
      const double sx = cx + cs * dx + sn * dy;
      const double y0 = std::floor(sy), x0 = std::floor(sx);
      const double fy = sy - y0, fx = sx - x0;
      PixelTaps& pt = taps[r * W + c];
      const std::array<double, 2> ys{y0, y0 + 1}, xs{x0, x0 + 1};
      const std::array<double, 2> wy{1 - fy, fy}, wx{1 - fx, fx};
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int k = a * 2 + b;
          const bool inside = ys[a] >= 0 && ys[a] < static_cast<double>(H) && xs[b] >= 0 &&
                              xs[b] < static_cast<double>(W);
          pt.idx[k] = inside ? static_cast<std::ptrdiff_t>(ys[a]) * static_cast<std::ptrdiff_t>(W) +
                                   static_cast<std::ptrdiff_t>(xs[b])
                             : -1;
          pt.w[k] = inside ? static_cast<float>(wy[a] * wx[b]) : 0.0f;
        }
      }
    }
  }

  Volume out(s, v.dtype());
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    const auto src = v.values<T>();
    const std::size_t plane = H * W * C;
    for (std::size_t f = 0; f < s.frames; ++f) {
      const T* in = src.data() + f * plane;
      T* o = dst.data() + f * plane;
      for (std::size_t p = 0; p < H * W; ++p) {
        const PixelTaps& pt = taps[p];
        for (std::size_t ch = 0; ch < C; ++ch) {
          float acc = 0.0f;
          for (int k = 0; k < 4; ++k)
            if (pt.idx[k] >= 0) acc += pt.w[k] * static_cast<float>(in[static_cast<std::size_t>(pt.idx[k]) * C + ch]);
          o[p * C + ch] = store<T>(acc);
        }
      }
    }
  });
  return out;
}

Volume rotate_small(const Volume& v, RandomStream& rng, const RotateSmallParams& p) {
  require(p.max_deg > 0.0 && p.max_deg <= 45.0, "rotate_small: max_deg must be in (0, 45]");
  return rotate_plane(v, rng.uniform(-p.max_deg, p.max_deg));
}

// ---------------------------------------------------------------------------

Volume elastic_with_lattice(const Volume& v, std::size_t grid, std::span<const double> lattice) {
  require(grid >= 2, "elastic: grid must be >= 2");
  require(lattice.size() == grid * grid * grid * 3, "elastic: lattice must have grid^3*3 entries");
  const Shape& s = v.shape();
  const std::size_t F = s.frames, H = s.height, W = s.width, C = s.channels;

  auto lattice_taps = [grid](std::size_t n) {
    std::vector<Tap> taps(n);
    for (std::size_t x = 0; x < n; ++x) {
      const double g = n > 1 ? static_cast<double>(x) * static_cast<double>(grid - 1) / static_cast<double>(n - 1) : 0.0;
      const std::size_t i0 = std::min(static_cast<std::size_t>(g), grid - 2);
      taps[x] = Tap{i0, i0 + 1, static_cast<float>(g - static_cast<double>(i0))};
    }
    return taps;
  };
  const auto tf = lattice_taps(F), th = lattice_taps(H), tw = lattice_taps(W);
  auto node = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t k) {
    return static_cast<float>(lattice[((a * grid + b) * grid + c) * 3 + k]);
  };

  Volume out(s, v.dtype());
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    const T* src = v.values<T>().data();
    std::vector<float> plane(grid * grid * 3), row(grid * 3);
    const auto hw = static_cast<std::ptrdiff_t>(H * W);
    const auto ww = static_cast<std::ptrdiff_t>(W);
    auto clamp_coord = [](float x, std::size_t n, std::ptrdiff_t& i0, std::ptrdiff_t& i1, float& t) {
      const float hi = static_cast<float>(n - 1);
      x = std::clamp(x, 0.0f, hi);
      const float fl = std::floor(x);
      i0 = static_cast<std::ptrdiff_t>(fl);
      i1 = std::min<std::ptrdiff_t>(i0 + 1, static_cast<std::ptrdiff_t>(n) - 1);
      t = x - fl;
    };
    T* o = dst.data();
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t b = 0; b < grid; ++b)
        for (std::size_t c = 0; c < grid; ++c)
          for (std::size_t k = 0; k < 3; ++k)
            plane[(b * grid + c) * 3 + k] = lerp(node(tf[f].i0, b, c, k), node(tf[f].i1, b, c, k), tf[f].t);
      for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t c = 0; c < grid; ++c)
          for (std::size_t k = 0; k < 3; ++k)
            row[c * 3 + k] = lerp(plane[(th[h].i0 * grid + c) * 3 + k], plane[(th[h].i1 * grid + c) * 3 + k], th[h].t);
        for (std::size_t w = 0; w < W; ++w) {
          const Tap& t = tw[w];
          const float df = lerp(row[t.i0 * 3 + 0], row[t.i1 * 3 + 0], t.t);
          const float dh = lerp(row[t.i0 * 3 + 1], row[t.i1 * 3 + 1], t.t);
          const float dw = lerp(row[t.i0 * 3 + 2], row[t.i1 * 3 + 2], t.t);
          std::ptrdiff_t f0, f1, h0, h1, w0, w1;
          float tf_, th_, tw_;
          clamp_coord(static_cast<float>(f) + df, F, f0, f1, tf_);
          clamp_coord(static_cast<float>(h) + dh, H, h0, h1, th_);
          clamp_coord(static_cast<float>(w) + dw, W, w0, w1, tw_);
          const std::ptrdiff_t i000 = f0 * hw + h0 * ww + w0, i001 = f0 * hw + h0 * ww + w1;
          const std::ptrdiff_t i010 = f0 * hw + h1 * ww + w0, i011 = f0 * hw + h1 * ww + w1;
          const std::ptrdiff_t i100 = f1 * hw + h0 * ww + w0, i101 = f1 * hw + h0 * ww + w1;
          const std::ptrdiff_t i110 = f1 * hw + h1 * ww + w0, i111 = f1 * hw + h1 * ww + w1;
          auto blend = [&](auto channels) {
            for (std::size_t ch = 0; ch < channels; ++ch) {
              auto at = [&](std::ptrdiff_t i) { return static_cast<float>(src[static_cast<std::size_t>(i) * channels + ch]); };
              const float a = lerp(lerp(at(i000), at(i001), tw_), lerp(at(i010), at(i011), tw_), th_);
              const float b = lerp(lerp(at(i100), at(i101), tw_), lerp(at(i110), at(i111), tw_), th_);
              *o++ = store<T>(lerp(a, b, tf_));
            }
          };
          if (C == 3) blend(std::integral_constant<std::size_t, 3>{});
          else blend(std::integral_constant<std::size_t, 1>{});
        }
      }
    }
  });
  return out;
}

Volume elastic(const Volume& v, RandomStream& rng, const ElasticParams& p) {
  require(p.grid >= 2, "elastic: grid must be >= 2");
  require(p.sigma >= 0.0, "elastic: sigma must be >= 0");
  std::vector<double> lattice(p.grid * p.grid * p.grid * 3);
  for (double& d : lattice) d = p.sigma * rng.normal();
  return elastic_with_lattice(v, p.grid, lattice);
}

// ---------------------------------------------------------------------------

Volume rotate90(const Volume& v, Plane plane, int k) {
  k = ((k % 4) + 4) % 4;
  if (k == 0) return v;
  const Shape& s = v.shape();
  const auto stride = voxel_strides(s);
  std::array<std::ptrdiff_t, 3> out_strides = stride;
  Shape out_shape = s;
  const auto [a, b] = plane_axes(plane);
  const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
  const auto na = static_cast<std::ptrdiff_t>(s.extent(a)), nb = static_cast<std::ptrdiff_t>(s.extent(b));
  std::ptrdiff_t base = 0;
  switch (k) {
    case 1:  // out[i,j] = in[j, nb-1-i]
      out_shape.extent(a) = s.extent(b);
      out_shape.extent(b) = s.extent(a);
      out_strides[ia] = -stride[ib];
      out_strides[ib] = stride[ia];
      base = (nb - 1) * stride[ib];
      break;
    case 2:  // out[i,j] = in[na-1-i, nb-1-j]
      out_strides[ia] = -stride[ia];
      out_strides[ib] = -stride[ib];
      base = (na - 1) * stride[ia] + (nb - 1) * stride[ib];
      break;
    default:  // out[i,j] = in[na-1-j, i]
      out_shape.extent(a) = s.extent(b);
      out_shape.extent(b) = s.extent(a);
      out_strides[ia] = stride[ib];
      out_strides[ib] = -stride[ia];
      base = (na - 1) * stride[ia];
      break;
  }
  return strided_copy(v, out_shape, base, out_strides);
}

Volume rotate90(const Volume& v, RandomStream& rng) {
  const auto plane = static_cast<Plane>(rng.uniform_int(0, 2));
  const auto k = static_cast<int>(rng.uniform_int(0, 3));
  return rotate90(v, plane, k);
}

Volume flip_axes(const Volume& v, std::array<bool, 3> axes) {
  if (!axes[0] && !axes[1] && !axes[2]) return v;
  const Shape& s = v.shape();
  auto strides = voxel_strides(s);
  std::ptrdiff_t base = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!axes[i]) continue;
    base += (static_cast<std::ptrdiff_t>(s.extent(kSpatialAxes[i])) - 1) * strides[i];
    strides[i] = -strides[i];
  }
  return strided_copy(v, s, base, strides);
}

Volume flip(const Volume& v, RandomStream& rng, const FlipParams& p) {
  require(p.p_axis >= 0.0 && p.p_axis <= 1.0, "flip: p_axis must be in [0, 1]");
  std::array<bool, 3> axes{};
  for (bool& a : axes) a = rng.bernoulli(p.p_axis);
  return flip_axes(v, axes);
}

// ---------------------------------------------------------------------------

Volume grid_dropout_at(const Volume& v, std::size_t cell, double ratio, std::array<std::size_t, 3> offset) {
  require(cell >= 2, "grid_dropout: cell must be >= 2");
  require(ratio >= 0.0 && ratio <= 1.0, "grid_dropout: ratio must be in [0, 1]");
  const auto hole = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(cell) + 0.5));
  if (hole == 0) return v;
  const Shape& s = v.shape();
  auto axis_mask = [&](std::size_t n, std::size_t off) {
    std::vector<char> m(n);
    off %= cell;
    for (std::size_t p = 0; p < n; ++p) m[p] = ((p + cell - off) % cell) < hole;
    return m;
  };
  const auto mf = axis_mask(s.frames, offset[0]);
  const auto mh = axis_mask(s.height, offset[1]);
  const auto mw = axis_mask(s.width, offset[2]);
  Volume out = v;
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    for (std::size_t f = 0; f < s.frames; ++f) {
      if (!mf[f]) continue;
      for (std::size_t h = 0; h < s.height; ++h) {
        if (!mh[h]) continue;
        for (std::size_t w = 0; w < s.width; ++w) {
          if (!mw[w]) continue;
          std::fill_n(dst.begin() + static_cast<std::ptrdiff_t>(v.offset(f, h, w)), s.channels, T{0});
        }
      }
    }
  });
  return out;
}

Volume grid_dropout(const Volume& v, RandomStream& rng, const GridDropoutParams& p) {
  require(p.cell >= 2, "grid_dropout: cell must be >= 2");
  std::array<std::size_t, 3> offset{};
  for (auto& o : offset) o = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(p.cell) - 1));
  return grid_dropout_at(v, p.cell, p.ratio, offset);
}

// ---------------------------------------------------------------------------

Volume add_gaussian_noise(const Volume& v, double sigma, RandomStream& rng) {
  require(sigma >= 0.0, "gaussian_noise: sigma must be >= 0");
  if (sigma == 0.0) return v;
  Volume out = v;
  out.visit([&](auto dst) {
    using T = std::remove_const_t<typename decltype(dst)::value_type>;
    for (T& x : dst) x = store<T>(static_cast<double>(x) + sigma * rng.normal());
  });
  return out;
}

Volume gaussian_noise(const Volume& v, RandomStream& rng, const GaussianNoiseParams& p) {
  require(p.sigma_max >= 0.0, "gaussian_noise: sigma_max must be >= 0");
  return add_gaussian_noise(v, rng.uniform(0.0, p.sigma_max), rng);
}

Volume apply_gamma(const Volume& v, double gamma) {
  require(gamma > 0.0, "random_gamma: gamma must be positive");
  if (gamma == 1.0) return v;
  if (v.dtype() == DType::UInt8) {
    std::array<std::uint8_t, 256> lut{};
    for (int x = 0; x < 256; ++x) lut[x] = saturate_u8(255.0 * std::pow(x / 255.0, gamma));
    Volume out = v;
    for (auto& x : out.values<std::uint8_t>()) x = lut[x];
    return out;
  }
  const auto src = v.values<float>();
  const auto [mn, mx] = std::minmax_element(src.begin(), src.end());
  const double lo = *mn, range = static_cast<double>(*mx) - lo;
  if (range == 0.0) return v;  // degenerate range: nothing to normalise against
  Volume out = v;
  for (auto& x : out.values<float>())
    x = static_cast<float>(lo + range * std::pow((static_cast<double>(x) - lo) / range, gamma));
  return out;
}

Volume random_gamma(const Volume& v, RandomStream& rng, const GammaParams& p) {
  require(p.lo > 0.0 && p.lo <= p.hi, "random_gamma: need 0 < lo <= hi");
  return apply_gamma(v, rng.uniform(p.lo, p.hi));
}

// ---------------------------------------------------------------------------

Volume crop_border(const Volume& v, Axis axis, Border border, std::size_t n) {
  const std::size_t ext = v.shape().extent(axis);
  require(n < ext, "crop_from_borders: cannot remove " + std::to_string(n) + " of " + std::to_string(ext) + " planes");
  if (n == 0) return v;
  Cuboid region = full_region(v.shape());
  std::size_t* lo = &region.f0;
  std::size_t* hi = &region.f1;
  if (axis == Axis::Height) lo = &region.r0, hi = &region.r1;
  if (axis == Axis::Width) lo = &region.c0, hi = &region.c1;
  if (border == Border::Leading)
    *lo = n;
  else
    *hi = ext - n;
  return crop(v, region);
}

Volume crop_from_borders(const Volume& v, RandomStream& rng, const BorderCropParams& p) {
  require(p.max_frac >= 0.0 && p.max_frac < 0.5, "crop_from_borders: max_frac must be in [0, 0.5)");
  const auto axis = static_cast<Axis>(rng.uniform_int(0, 2));
  const auto border = static_cast<Border>(rng.uniform_int(0, 1));
  const auto ext = static_cast<double>(v.shape().extent(axis));
  const auto n = rng.uniform_int(0, static_cast<std::int64_t>(std::floor(p.max_frac * ext)));
  return crop_border(v, axis, border, static_cast<std::size_t>(n));
}

Volume drop_planes(const Volume& v, Axis axis, std::vector<std::size_t> indices) {
  if (indices.empty()) return v;
  const std::size_t ext = v.shape().extent(axis);
  std::sort(indices.begin(), indices.end());
  require(std::adjacent_find(indices.begin(), indices.end()) == indices.end(), "drop_plane: duplicate plane index");
  require(indices.front() >= 1 && indices.back() + 2 <= ext, "drop_plane: only interior planes may be removed");
  std::vector<std::size_t> keep;
  keep.reserve(ext - indices.size());
  auto it = indices.begin();
  for (std::size_t i = 0; i < ext; ++i) {
    if (it != indices.end() && *it == i)
      ++it;
    else
      keep.push_back(i);
  }
  return gather_axis(v, axis, keep);
}

Volume drop_plane(const Volume& v, RandomStream& rng, const DropPlaneParams& p) {
  require(p.max_frac >= 0.0 && p.max_frac < 0.5, "drop_plane: max_frac must be in [0, 0.5)");
  std::vector<Axis> eligible;
  for (Axis a : kSpatialAxes)
    if (v.shape().extent(a) >= 3) eligible.push_back(a);
  if (eligible.empty())
    throw Error(ErrorCode::AxisTooShort, "drop_plane: every axis has fewer than 3 planes in " + to_string(v.shape()));
  const Axis axis = eligible[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1))];
  const std::size_t ext = v.shape().extent(axis);
  const auto kmax = static_cast<std::int64_t>(std::floor(p.max_frac * static_cast<double>(ext - 2)));
  const auto k = static_cast<std::size_t>(rng.uniform_int(0, kmax));
  std::vector<std::size_t> interior(ext - 2);
  std::iota(interior.begin(), interior.end(), std::size_t{1});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(interior.size()) - 1));
    std::swap(interior[i], interior[j]);
  }
  interior.resize(k);
  return drop_planes(v, axis, std::move(interior));
}

// ---------------------------------------------------------------------------

Volume resize(const Volume& v, std::array<std::size_t, 3> target, Interpolation mode) {
  require(target[0] >= 1 && target[1] >= 1 && target[2] >= 1, "resize: target extents must be >= 1");
  const Shape& s = v.shape();
  if (s.frames == target[0] && s.height == target[1] && s.width == target[2]) return v;

  if (mode == Interpolation::Nearest) {
    const auto nf = nearest_index(s.frames, target[0]);
    const auto nh = nearest_index(s.height, target[1]);
    const auto nw = nearest_index(s.width, target[2]);
    const Shape out_shape{target[0], target[1], target[2], s.channels};
    Volume out(out_shape, v.dtype());
    out.visit([&](auto dst) {
      using T = std::remove_const_t<typename decltype(dst)::value_type>;
      const auto src = v.values<T>();
      std::size_t o = 0;
      for (std::size_t f : nf)
        for (std::size_t h : nh)
          for (std::size_t w : nw)
            for (std::size_t c = 0; c < s.channels; ++c) dst[o++] = src[v.offset(f, h, w, c)];
    });
    return out;
  }

  // Separable trilinear: one linear pass per axis whose extent changes.
  Shape shape = s;
  std::vector<float> buf = to_float_buffer(v);
  for (std::size_t i = 0; i < 3; ++i) {
    const Axis a = kSpatialAxes[2 - i];  // width first: contiguous rows
    if (shape.extent(a) != target[2 - i]) buf = linear_pass(buf, shape, a, target[2 - i]);
  }
  return from_float_buffer(shape, v.dtype(), buf);
}

}  // namespace voxflow::transforms
