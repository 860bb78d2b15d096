#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "voxflow/error.hpp"

namespace voxflow {

enum class DType : std::uint8_t { UInt8 = 0, Float32 = 1 };

std::string_view dtype_name(DType d) noexcept;

/// Spatial axes. Channels are never addressed as a spatial axis.
enum class Axis : std::uint8_t { Frames = 0, Height = 1, Width = 2 };

inline constexpr std::array<Axis, 3> kSpatialAxes = {Axis::Frames, Axis::Height, Axis::Width};

struct Shape {
  std::size_t frames = 1;
  std::size_t height = 1;
  std::size_t width = 1;
  std::size_t channels = 1;

  std::size_t extent(Axis a) const noexcept;
  std::size_t& extent(Axis a) noexcept;
  std::size_t voxels() const noexcept { return frames * height * width; }
  std::size_t elements() const noexcept { return voxels() * channels; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

/// Half-open region [f0,f1) x [r0,r1) x [c0,c1).
struct Cuboid {
  std::size_t f0 = 0, f1 = 0;
  std::size_t r0 = 0, r1 = 0;
  std::size_t c0 = 0, c1 = 0;

  std::size_t frames() const noexcept { return f1 - f0; }
  std::size_t rows() const noexcept { return r1 - r0; }
  std::size_t cols() const noexcept { return c1 - c0; }
  std::size_t volume() const noexcept { return frames() * rows() * cols(); }
  bool contains(const Cuboid& other) const noexcept;

  friend bool operator==(const Cuboid&, const Cuboid&) = default;
};

/// Dense (F,H,W,C) voxel array, row-major with channels innermost.
class Volume {
 public:
  Volume() : Volume(Shape{}, DType::UInt8) {}
  /// Zero-filled volume.
  Volume(Shape shape, DType dtype);

  static Volume from_u8(Shape shape, std::vector<std::uint8_t> data);
  /// Rejects non-finite values.
  static Volume from_f32(Shape shape, std::vector<float> data);

  const Shape& shape() const noexcept { return shape_; }
  DType dtype() const noexcept { return dtype_; }

  template <class T>
  std::span<const T> values() const {
    return std::get<std::vector<T>>(data_);
  }
  template <class T>
  std::span<T> values() {
    return std::get<std::vector<T>>(data_);
  }

  std::size_t offset(std::size_t f, std::size_t h, std::size_t w, std::size_t c = 0) const noexcept {
    return ((f * shape_.height + h) * shape_.width + w) * shape_.channels + c;
  }

  /// Value at (f,h,w,c) widened to double.
  double at(std::size_t f, std::size_t h, std::size_t w, std::size_t c = 0) const noexcept;

  /// Raw little-endian bytes of the buffer.
  std::span<const std::byte> bytes() const noexcept;

  /// Bitwise equality of shape, dtype and buffer.
  friend bool operator==(const Volume& a, const Volume& b) noexcept;

  /// Invokes fn with the typed buffer (std::span<T> or std::span<const T>).
  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit([&](const auto& vec) -> decltype(auto) {
      using T = typename std::decay_t<decltype(vec)>::value_type;
      return fn(std::span<const T>(vec));
    }, data_);
  }
  template <class Fn>
  decltype(auto) visit(Fn&& fn) {
    return std::visit([&](auto& vec) -> decltype(auto) {
      using T = typename std::decay_t<decltype(vec)>::value_type;
      return fn(std::span<T>(vec));
    }, data_);
  }

 private:
  Volume(Shape shape, DType dtype, std::variant<std::vector<std::uint8_t>, std::vector<float>> data);
  static void validate_shape(const Shape& s);

  Shape shape_;
  DType dtype_;
  std::variant<std::vector<std::uint8_t>, std::vector<float>> data_;
};

template <class T>
inline constexpr DType dtype_of = std::is_same_v<T, std::uint8_t> ? DType::UInt8 : DType::Float32;

/// float -> uint8 conversion: round half away from zero, clamp to [0,255].
inline std::uint8_t saturate_u8(double x) noexcept {
  if (!(x > 0.0)) return 0;  // also maps NaN to 0
  if (x >= 255.0) return 255;
  return static_cast<std::uint8_t>(x + 0.5);
}

/// Copies the voxels inside region. Throws RegionOutOfBounds.
Volume crop(const Volume& v, const Cuboid& region);

/// Region covering the whole volume.
Cuboid full_region(const Shape& s) noexcept;

/// uint8 -> float32 is exact; float32 -> uint8 rounds half away from zero and clamps.
Volume cast(const Volume& v, DType target);

}  // namespace voxflow
