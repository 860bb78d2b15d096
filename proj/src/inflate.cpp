#include "voxflow/inflate.hpp"

#include <cmath>
#include <fnmatch.h>

#include "voxflow/error.hpp"

namespace voxflow::inflate {

namespace {

bool all_finite(const std::vector<float>& v) {
  for (float x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

template <class T>
std::vector<T> inflate_weights(const std::vector<T>& w2, std::size_t kd, InflationMode mode) {
  const std::size_t plane = w2.size();
  std::vector<T> out(plane * kd, T{0});
  if (mode == InflationMode::CenterPlane) {
    std::copy(w2.begin(), w2.end(), out.begin() + static_cast<std::ptrdiff_t>(((kd - 1) / 2) * plane));
  } else {
    const T div = static_cast<T>(kd);
    for (std::size_t d = 0; d < kd; ++d)
      for (std::size_t i = 0; i < plane; ++i) out[d * plane + i] = w2[i] / div;
  }
  return out;
}

void check_depth(std::size_t kd, InflationMode mode) {
  if (kd == 0) throw Error(ErrorCode::InvalidArgument, "inflation depth must be >= 1");
  if (mode == InflationMode::CenterPlane && kd % 2 == 0)
    throw Error(ErrorCode::EvenDepthCenter, "center-plane inflation needs an odd depth, got " + std::to_string(kd));
}

}  // namespace

void Kernel2D::validate() const {
  if (kh == 0 || kw == 0 || c_in == 0 || c_out == 0) throw Error(ErrorCode::ShapeMismatch, "kernel extents must be >= 1");
  if (weights.size() != kh * kw * c_in * c_out) throw Error(ErrorCode::ShapeMismatch, "kernel weight count does not match shape");
  if (bias && bias->size() != c_out) throw Error(ErrorCode::ShapeMismatch, "bias length must equal c_out");
  if (!all_finite(weights)) throw Error(ErrorCode::InvalidArgument, "kernel weights must be finite");
}

void Kernel3D::validate() const {
  if (kd == 0 || kh == 0 || kw == 0 || c_in == 0 || c_out == 0) throw Error(ErrorCode::ShapeMismatch, "kernel extents must be >= 1");
  if (weights.size() != kd * kh * kw * c_in * c_out) throw Error(ErrorCode::ShapeMismatch, "kernel weight count does not match shape");
  if (bias && bias->size() != c_out) throw Error(ErrorCode::ShapeMismatch, "bias length must equal c_out");
  if (!all_finite(weights)) throw Error(ErrorCode::InvalidArgument, "kernel weights must be finite");
}

Kernel3D inflate(const Kernel2D& k2, std::size_t kd, InflationMode mode) {
  k2.validate();
  check_depth(kd, mode);
  return Kernel3D{kd, k2.kh, k2.kw, k2.c_in, k2.c_out, inflate_weights(k2.weights, kd, mode), k2.bias};
}

TensorMap inflate_map(const TensorMap& tensors, const std::vector<InflationRule>& rules,
                      std::vector<InflatedTensor>* report) {
  for (const auto& r : rules) check_depth(r.depth, r.mode);
  TensorMap out;
  for (const auto& [name, tensor] : tensors) {
    const InflationRule* rule = nullptr;
    for (const auto& r : rules) {
      if (fnmatch(r.pattern.c_str(), name.c_str(), 0) == 0) {
        rule = &r;
        break;
      }
    }
    if (!rule) {
      out.insert(name, tensor);
      continue;
    }
    if (tensor.shape.size() != 4)
      throw Error(ErrorCode::ShapeMismatch, "tensor '" + name + "' has shape " + shape_string(tensor.shape) +
                                                ", expected a 4-D (kh, kw, c_in, c_out) kernel");
    if (tensor.dtype == TensorDType::U8)
      throw Error(ErrorCode::ShapeMismatch, "tensor '" + name + "' is U8, expected a floating-point kernel");
    std::vector<std::size_t> shape = tensor.shape;
    shape.insert(shape.begin(), rule->depth);
    Tensor inflated = tensor.dtype == TensorDType::F32
                          ? Tensor::from_f32(shape, inflate_weights(tensor.to_f32(), rule->depth, rule->mode))
                          : Tensor::from_f64(shape, inflate_weights(tensor.to_f64(), rule->depth, rule->mode));
    if (report) report->push_back({name, tensor.shape, shape});
    out.insert(name, std::move(inflated));
  }
  return out;
}

Image2D conv2d_ref(const Image2D& image, const Kernel2D& k) {
  k.validate();
  if (image.c != k.c_in) throw Error(ErrorCode::ShapeMismatch, "image channels do not match kernel c_in");
  if (k.kh > image.h || k.kw > image.w)
    throw Error(ErrorCode::KernelLargerThanInput, "kernel " + std::to_string(k.kh) + "x" + std::to_string(k.kw) +
                                                      " larger than image " + std::to_string(image.h) + "x" + std::to_string(image.w));
  Image2D out{image.h - k.kh + 1, image.w - k.kw + 1, k.c_out, {}};
  out.data.resize(out.h * out.w * out.c);
  for (std::size_t y = 0; y < out.h; ++y) {
    for (std::size_t x = 0; x < out.w; ++x) {
      for (std::size_t co = 0; co < k.c_out; ++co) {
        double acc = k.bias ? (*k.bias)[co] : 0.0;
        for (std::size_t i = 0; i < k.kh; ++i)
          for (std::size_t j = 0; j < k.kw; ++j)
            for (std::size_t ci = 0; ci < k.c_in; ++ci)
              acc += static_cast<double>(image.at(y + i, x + j, ci)) * static_cast<double>(k.at(i, j, ci, co));
        out.data[(y * out.w + x) * out.c + co] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Grid3D conv3d_ref(const Grid3D& vol, const Kernel3D& k) {
  k.validate();
  if (vol.c != k.c_in) throw Error(ErrorCode::ShapeMismatch, "volume channels do not match kernel c_in");
  if (k.kd > vol.d || k.kh > vol.h || k.kw > vol.w)
    throw Error(ErrorCode::KernelLargerThanInput, "kernel does not fit inside the input volume");
  Grid3D out{vol.d - k.kd + 1, vol.h - k.kh + 1, vol.w - k.kw + 1, k.c_out, {}};
  out.data.resize(out.d * out.h * out.w * out.c);
  for (std::size_t z = 0; z < out.d; ++z)
    for (std::size_t y = 0; y < out.h; ++y)
      for (std::size_t x = 0; x < out.w; ++x)
        for (std::size_t co = 0; co < k.c_out; ++co) {
          double acc = k.bias ? (*k.bias)[co] : 0.0;
          for (std::size_t dz = 0; dz < k.kd; ++dz)
            for (std::size_t i = 0; i < k.kh; ++i)
              for (std::size_t j = 0; j < k.kw; ++j)
                for (std::size_t ci = 0; ci < k.c_in; ++ci)
                  acc += static_cast<double>(vol.at(z + dz, y + i, x + j, ci)) * static_cast<double>(k.at(dz, i, j, ci, co));
          out.data[((z * out.h + y) * out.w + x) * out.c + co] = static_cast<float>(acc);
        }
  return out;
}

}  // namespace voxflow::inflate
