#include "voxflow/tensor_map.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <functional>
#include <numeric>

#include "voxflow/error.hpp"

namespace voxflow {

std::string_view tensor_dtype_name(TensorDType d) noexcept {
  switch (d) {
    case TensorDType::F32: return "F32";
    case TensorDType::F64: return "F64";
    case TensorDType::U8: return "U8";
  }
  return "?";
}

std::size_t tensor_dtype_size(TensorDType d) noexcept {
  switch (d) {
    case TensorDType::F32: return 4;
    case TensorDType::F64: return 8;
    case TensorDType::U8: return 1;
  }
  return 0;
}

std::size_t Tensor::elements() const noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

// Host byte order is assumed little-endian, as on every supported target.
static_assert(std::endian::native == std::endian::little, "voxflow assumes a little-endian host");

Tensor Tensor::from_f32(std::vector<std::size_t> shape, const std::vector<float>& values) {
  Tensor t{TensorDType::F32, std::move(shape), {}};
  if (t.elements() != values.size()) throw Error(ErrorCode::ShapeMismatch, "value count does not match shape " + shape_string(t.shape));
  t.data.resize(values.size() * 4);
  std::memcpy(t.data.data(), values.data(), t.data.size());
  return t;
}

Tensor Tensor::from_f64(std::vector<std::size_t> shape, const std::vector<double>& values) {
  Tensor t{TensorDType::F64, std::move(shape), {}};
  if (t.elements() != values.size()) throw Error(ErrorCode::ShapeMismatch, "value count does not match shape " + shape_string(t.shape));
  t.data.resize(values.size() * 8);
  std::memcpy(t.data.data(), values.data(), t.data.size());
  return t;
}

std::vector<float> Tensor::to_f32() const {
  if (dtype != TensorDType::F32) throw Error(ErrorCode::ShapeMismatch, "tensor is not F32");
  std::vector<float> out(data.size() / 4);
  std::memcpy(out.data(), data.data(), out.size() * 4);
  return out;
}

std::vector<double> Tensor::to_f64() const {
  if (dtype != TensorDType::F64) throw Error(ErrorCode::ShapeMismatch, "tensor is not F64");
  std::vector<double> out(data.size() / 8);
  std::memcpy(out.data(), data.data(), out.size() * 8);
  return out;
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(shape[i]);
  }
  return s.empty() ? "scalar" : s;
}

void TensorMap::insert(std::string name, Tensor tensor) {
  if (find(name)) throw Error(ErrorCode::SchemaError, "duplicate tensor name '" + name + "'");
  entries_.emplace_back(std::move(name), std::move(tensor));
}

const Tensor* TensorMap::find(std::string_view name) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.first == name; });
  return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace voxflow
