#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace voxflow {

enum class TensorDType : std::uint8_t { F32, F64, U8 };

std::string_view tensor_dtype_name(TensorDType d) noexcept;  // "F32", "F64", "U8"
std::size_t tensor_dtype_size(TensorDType d) noexcept;

/// A dense tensor held as raw little-endian bytes.
struct Tensor {
  TensorDType dtype = TensorDType::F32;
  std::vector<std::size_t> shape;
  std::vector<std::uint8_t> data;

  std::size_t elements() const noexcept;

  static Tensor from_f32(std::vector<std::size_t> shape, const std::vector<float>& values);
  static Tensor from_f64(std::vector<std::size_t> shape, const std::vector<double>& values);
  std::vector<float> to_f32() const;
  std::vector<double> to_f64() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

std::string shape_string(const std::vector<std::size_t>& shape);  // "3x3x1x1"

/// Named tensors in insertion order. Names are unique.
class TensorMap {
 public:
  using Entry = std::pair<std::string, Tensor>;

  void insert(std::string name, Tensor tensor);  // throws SchemaError on duplicate name
  const Tensor* find(std::string_view name) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const TensorMap&, const TensorMap&) = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace voxflow
