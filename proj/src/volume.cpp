#include "voxflow/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace voxflow {

std::string_view dtype_name(DType d) noexcept {
  return d == DType::UInt8 ? "uint8" : "float32";
}

std::size_t Shape::extent(Axis a) const noexcept {
  switch (a) {
    case Axis::Frames: return frames;
    case Axis::Height: return height;
    case Axis::Width: return width;
  }
  return 0;
}

std::size_t& Shape::extent(Axis a) noexcept {
  switch (a) {
    case Axis::Frames: return frames;
    case Axis::Height: return height;
    case Axis::Width: break;
  }
  return width;
}

std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.frames) + "," + std::to_string(s.height) + "," +
         std::to_string(s.width) + "," + std::to_string(s.channels) + ")";
}

bool Cuboid::contains(const Cuboid& o) const noexcept {
  return f0 <= o.f0 && o.f1 <= f1 && r0 <= o.r0 && o.r1 <= r1 && c0 <= o.c0 && o.c1 <= c1;
}

void Volume::validate_shape(const Shape& s) {
  if (s.frames == 0 || s.height == 0 || s.width == 0)
    throw Error(ErrorCode::InvalidVolume, "spatial extents must be >= 1, got " + to_string(s));
  if (s.channels != 1 && s.channels != 3)
    throw Error(ErrorCode::InvalidVolume, "channels must be 1 or 3, got " + std::to_string(s.channels));
}

Volume::Volume(Shape shape, DType dtype) : shape_(shape), dtype_(dtype) {
  validate_shape(shape);
  if (dtype == DType::UInt8)
    data_ = std::vector<std::uint8_t>(shape.elements(), 0);
  else
    data_ = std::vector<float>(shape.elements(), 0.0f);
}

Volume::Volume(Shape shape, DType dtype,
               std::variant<std::vector<std::uint8_t>, std::vector<float>> data)
    : shape_(shape), dtype_(dtype), data_(std::move(data)) {}

Volume Volume::from_u8(Shape shape, std::vector<std::uint8_t> data) {
  validate_shape(shape);
  if (data.size() != shape.elements())
    throw Error(ErrorCode::InvalidVolume, "buffer length " + std::to_string(data.size()) +
                                              " does not match shape " + to_string(shape));
  return Volume(shape, DType::UInt8, std::move(data));
}

Volume Volume::from_f32(Shape shape, std::vector<float> data) {
  validate_shape(shape);
  if (data.size() != shape.elements())
    throw Error(ErrorCode::InvalidVolume, "buffer length " + std::to_string(data.size()) +
                                              " does not match shape " + to_string(shape));
  if (!std::all_of(data.begin(), data.end(), [](float x) { return std::isfinite(x); }))
    throw Error(ErrorCode::InvalidVolume, "float32 volume contains non-finite values");
  return Volume(shape, DType::Float32, std::move(data));
}

double Volume::at(std::size_t f, std::size_t h, std::size_t w, std::size_t c) const noexcept {
  const std::size_t i = offset(f, h, w, c);
  return visit([i](auto vals) { return static_cast<double>(vals[i]); });
}

std::span<const std::byte> Volume::bytes() const noexcept {
  return visit([](auto vals) { return std::as_bytes(vals); });
}

bool operator==(const Volume& a, const Volume& b) noexcept {
  if (a.shape_ != b.shape_ || a.dtype_ != b.dtype_) return false;
  const auto x = a.bytes();
  const auto y = b.bytes();
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size()) == 0;
}

Cuboid full_region(const Shape& s) noexcept {
  return Cuboid{0, s.frames, 0, s.height, 0, s.width};
}

Volume crop(const Volume& v, const Cuboid& region) {
  const Shape& s = v.shape();
  if (region.f0 >= region.f1 || region.r0 >= region.r1 || region.c0 >= region.c1 ||
      region.f1 > s.frames || region.r1 > s.height || region.c1 > s.width) {
    throw Error(ErrorCode::RegionOutOfBounds,
                "region f[" + std::to_string(region.f0) + "," + std::to_string(region.f1) + ") r[" +
                    std::to_string(region.r0) + "," + std::to_string(region.r1) + ") c[" +
                    std::to_string(region.c0) + "," + std::to_string(region.c1) +
                    ") does not fit volume " + to_string(s));
  }
  const Shape out_shape{region.frames(), region.rows(), region.cols(), s.channels};
  Volume out(out_shape, v.dtype());
  const std::size_t row_len = region.cols() * s.channels;
  out.visit([&](auto dst) {
    using T = typename decltype(dst)::value_type;
    const auto src = v.values<std::remove_const_t<T>>();
    std::size_t o = 0;
    for (std::size_t f = region.f0; f < region.f1; ++f) {
      for (std::size_t r = region.r0; r < region.r1; ++r) {
        const std::size_t i = v.offset(f, r, region.c0);
        std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(i), row_len,
                    dst.begin() + static_cast<std::ptrdiff_t>(o));
        o += row_len;
      }
    }
  });
  return out;
}

Volume cast(const Volume& v, DType target) {
  if (v.dtype() == target) return v;
  if (target == DType::Float32) {
    const auto src = v.values<std::uint8_t>();
    return Volume::from_f32(v.shape(), std::vector<float>(src.begin(), src.end()));
  }
  const auto src = v.values<float>();
  std::vector<std::uint8_t> out(src.size());
  std::transform(src.begin(), src.end(), out.begin(), [](float x) { return saturate_u8(x); });
  return Volume::from_u8(v.shape(), std::move(out));
}

}  // namespace voxflow
