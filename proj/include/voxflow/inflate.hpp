#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "voxflow/tensor_map.hpp"

namespace voxflow::inflate {

/// 2-D convolution kernel, weights laid out (kh, kw, c_in, c_out).
struct Kernel2D {
  std::size_t kh = 1, kw = 1, c_in = 1, c_out = 1;
  std::vector<float> weights;
  std::optional<std::vector<float>> bias;

  float at(std::size_t i, std::size_t j, std::size_t ci, std::size_t co) const noexcept {
    return weights[((i * kw + j) * c_in + ci) * c_out + co];
  }
  void validate() const;
};

/// 3-D convolution kernel, weights laid out (kd, kh, kw, c_in, c_out).
struct Kernel3D {
  std::size_t kd = 1, kh = 1, kw = 1, c_in = 1, c_out = 1;
  std::vector<float> weights;
  std::optional<std::vector<float>> bias;

  float at(std::size_t d, std::size_t i, std::size_t j, std::size_t ci, std::size_t co) const noexcept {
    return weights[(((d * kh + i) * kw + j) * c_in + ci) * c_out + co];
  }
  void validate() const;
};

enum class InflationMode {
  CenterPlane,  // kernel in the middle depth plane, zeros elsewhere
  Averaged,     // kernel / kd in every depth plane
};

/// Throws EvenDepthCenter for CenterPlane with even kd, InvalidArgument for kd == 0.
Kernel3D inflate(const Kernel2D& k2, std::size_t kd, InflationMode mode);

struct InflationRule {
  std::string pattern;  // shell glob matched against the whole tensor name
  std::size_t depth = 3;
  InflationMode mode = InflationMode::CenterPlane;
};

struct InflatedTensor {
  std::string name;
  std::vector<std::size_t> old_shape, new_shape;
};

/// Inflates every tensor matched by a rule (first match wins); others pass through
/// byte-identical. Matched tensors must be 4-D float kernels, else ShapeMismatch.
TensorMap inflate_map(const TensorMap& tensors, const std::vector<InflationRule>& rules,
                      std::vector<InflatedTensor>* report = nullptr);

/// Multi-channel 2-D image (h, w, c) and 3-D grid (d, h, w, c), channels innermost.
struct Image2D {
  std::size_t h = 0, w = 0, c = 1;
  std::vector<float> data;
  float at(std::size_t y, std::size_t x, std::size_t ch = 0) const noexcept { return data[(y * w + x) * c + ch]; }
};
struct Grid3D {
  std::size_t d = 0, h = 0, w = 0, c = 1;
  std::vector<float> data;
  float at(std::size_t z, std::size_t y, std::size_t x, std::size_t ch = 0) const noexcept {
    return data[((z * h + y) * w + x) * c + ch];
  }
};

/// Direct-summation cross-correlation, valid padding, stride 1, float64 accumulation.
/// Output channels = c_out. Throws KernelLargerThanInput.
Image2D conv2d_ref(const Image2D& image, const Kernel2D& k);
Grid3D conv3d_ref(const Grid3D& volume, const Kernel3D& k);

}  // namespace voxflow::inflate
