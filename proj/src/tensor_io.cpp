#include "voxflow/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace voxflow::io {

using nlohmann::ordered_json;

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw Error(ErrorCode::IoError, "cannot determine size of '" + path.string() + "'");
  in.seekg(0, std::ios::beg);
  Bytes data(static_cast<std::size_t>(size));
  if (!in.read(reinterpret_cast<char*>(data.data()), size)) throw Error(ErrorCode::IoError, "short read from '" + path.string() + "'");
  return data;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

std::string read_text(const fs::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

void write_text(const fs::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

static_assert(std::endian::native == std::endian::little, "VOX1/TMAP codecs assume a little-endian host");

template <class T>
void put(Bytes& out, T value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

template <class T>
T get(std::span<const std::uint8_t> bytes, std::size_t at) {
  T value;
  std::memcpy(&value, bytes.data() + at, sizeof(T));
  return value;
}

constexpr char kVoxMagic[4] = {'V', 'O', 'X', '1'};

Bytes vox1_header(DType dtype, std::uint64_t f, std::uint64_t h, std::uint64_t w, std::uint64_t c) {
  for (auto d : {f, h, w, c})
    if (d > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::InvalidVolume, "extent does not fit VOX1 u32 dims");
  Bytes out(kVoxMagic, kVoxMagic + 4);
  put<std::uint16_t>(out, 1);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dtype));
  put<std::uint8_t>(out, 0);
  for (auto d : {f, h, w, c}) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  return out;
}

}  // namespace

Bytes encode_vox1(const Volume& v) {
  const Shape& s = v.shape();
  Bytes out = vox1_header(v.dtype(), s.frames, s.height, s.width, s.channels);
  const auto raw = v.bytes();
  const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
  out.insert(out.end(), p, p + raw.size());
  return out;
}

Vox1Raw decode_vox1_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kVoxMagic, 4) != 0)
    throw Error(ErrorCode::BadMagic, "not a VOX1 file (magic '" + std::string(bytes.begin(), bytes.begin() + 4) + "')");
  if (bytes.size() < kVox1HeaderSize)
    throw Error(ErrorCode::TruncatedFile, "VOX1 header needs 24 bytes, file has " + std::to_string(bytes.size()));
  const auto version = get<std::uint16_t>(bytes, 4);
  if (version != 1) throw Error(ErrorCode::UnsupportedVersion, "VOX1 version " + std::to_string(version) + " is not supported");
  const auto code = get<std::uint8_t>(bytes, 6);
  if (code > 1) throw Error(ErrorCode::DtypeUnknown, "VOX1 dtype code " + std::to_string(code));
  if (get<std::uint8_t>(bytes, 7) != 0) throw Error(ErrorCode::UnsupportedVersion, "VOX1 reserved byte must be 0");

  Vox1Raw raw;
  raw.dtype = static_cast<DType>(code);
  raw.frames = get<std::uint32_t>(bytes, 8);
  raw.height = get<std::uint32_t>(bytes, 12);
  raw.width = get<std::uint32_t>(bytes, 16);
  raw.channels = get<std::uint32_t>(bytes, 20);
  // Validate the declared payload against the actual length before allocating.
  const std::uint64_t elem = code == 0 ? 1 : 4;
  std::uint64_t expected = elem;
  for (std::uint64_t d : {raw.frames, raw.height, raw.width, raw.channels}) {
    if (d == 0) throw Error(ErrorCode::InvalidVolume, "VOX1 dims must be >= 1");
    if (expected > std::numeric_limits<std::uint64_t>::max() / d) throw Error(ErrorCode::TruncatedFile, "VOX1 dims overflow");
    expected *= d;
  }
  const std::uint64_t available = bytes.size() - kVox1HeaderSize;
  if (available < expected)
    throw Error(ErrorCode::TruncatedFile, "VOX1 declares " + std::to_string(expected) + " data bytes, file has " + std::to_string(available));
  if (available > expected)
    throw Error(ErrorCode::SizeMismatch, "VOX1 has " + std::to_string(available - expected) + " trailing bytes");
  raw.data.assign(bytes.begin() + kVox1HeaderSize, bytes.end());
  return raw;
}

Volume decode_vox1(std::span<const std::uint8_t> bytes) {
  Vox1Raw raw = decode_vox1_raw(bytes);
  const Shape shape{raw.frames, raw.height, raw.width, raw.channels};
  if (raw.dtype == DType::UInt8) return Volume::from_u8(shape, std::move(raw.data));
  std::vector<float> values(raw.data.size() / 4);
  std::memcpy(values.data(), raw.data.data(), raw.data.size());
  return Volume::from_f32(shape, std::move(values));
}

Volume read_vox1(const fs::path& path) {
  try {
    return decode_vox1(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw e.with_context(path.string());
  }
}

void write_vox1(const fs::path& path, const Volume& v) { write_file(path, encode_vox1(v)); }

heatmap::FeatureVolume read_features(const fs::path& path) {
  Vox1Raw raw = decode_vox1_raw(read_file(path));
  if (raw.dtype != DType::Float32) throw Error(ErrorCode::DtypeUnknown, path.string() + ": feature volumes must be float32");
  heatmap::FeatureVolume fv{raw.frames, raw.height, raw.width, raw.channels, std::vector<float>(raw.data.size() / 4)};
  std::memcpy(fv.data.data(), raw.data.data(), raw.data.size());
  fv.validate();
  return fv;
}

Bytes encode_features(const heatmap::FeatureVolume& fv) {
  fv.validate();
  Bytes out = vox1_header(DType::Float32, fv.frames, fv.height, fv.width, fv.channels);
  const auto* p = reinterpret_cast<const std::uint8_t*>(fv.data.data());
  out.insert(out.end(), p, p + fv.data.size() * 4);
  return out;
}

// ---------------------------------------------------------------------------

Bytes encode_tmap(const TensorMap& m) {
  ordered_json header = ordered_json::object();
  std::size_t offset = 0;
  for (const auto& [name, t] : m) {
    if (t.data.size() != t.elements() * tensor_dtype_size(t.dtype))
      throw Error(ErrorCode::ShapeMismatch, "tensor '" + name + "' byte length does not match shape " + shape_string(t.shape));
    ordered_json e;
    e["dtype"] = tensor_dtype_name(t.dtype);
    e["shape"] = t.shape;
    e["data_offsets"] = {offset, offset + t.data.size()};
    header[name] = std::move(e);
    offset += t.data.size();
  }
  const std::string text = header.dump();
  Bytes out;
  out.reserve(8 + text.size() + offset);
  put<std::uint64_t>(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& [_, t] : m) out.insert(out.end(), t.data.begin(), t.data.end());
  return out;
}

TensorMap decode_tmap(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw Error(ErrorCode::TruncatedFile, "TMAP needs an 8-byte header length");
  const auto n = get<std::uint64_t>(bytes, 0);
  if (n > bytes.size() - 8) throw Error(ErrorCode::TruncatedFile, "TMAP header length " + std::to_string(n) + " exceeds file size");
  ordered_json header;
  try {
    header = ordered_json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(n));
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, std::string("TMAP header: ") + e.what());
  }
  if (!header.is_object()) throw Error(ErrorCode::JsonMalformed, "TMAP header must be a JSON object");
  const std::uint64_t region = bytes.size() - 8 - n;

  struct Item {
    std::string name;
    Tensor tensor;
    std::uint64_t begin, end;
  };
  std::vector<Item> items;
  for (const auto& [name, e] : header.items()) {
    if (name == "__metadata__") continue;
    auto bad = [&](const std::string& what) { return Error(ErrorCode::SchemaError, "tensor '" + name + "': " + what); };
    if (!e.is_object() || !e.contains("dtype") || !e.contains("shape") || !e.contains("data_offsets"))
      throw bad("entry needs dtype, shape and data_offsets");
    Item it{name, {}, 0, 0};
    const auto& dt = e["dtype"];
    if (dt == "F32") it.tensor.dtype = TensorDType::F32;
    else if (dt == "F64") it.tensor.dtype = TensorDType::F64;
    else if (dt == "U8") it.tensor.dtype = TensorDType::U8;
    else throw Error(ErrorCode::DtypeUnknown, "tensor '" + name + "': dtype " + dt.dump());
    if (!e["shape"].is_array()) throw bad("shape must be an array");
    std::uint64_t expected = tensor_dtype_size(it.tensor.dtype);
    for (const auto& d : e["shape"]) {
      if (!d.is_number_unsigned()) throw bad("shape entries must be non-negative integers");
      const auto v = d.get<std::uint64_t>();
      if (v != 0 && expected > std::numeric_limits<std::uint64_t>::max() / v) throw bad("shape overflows");
      expected *= v;
      it.tensor.shape.push_back(static_cast<std::size_t>(v));
    }
    const auto& off = e["data_offsets"];
    if (!off.is_array() || off.size() != 2 || !off[0].is_number_unsigned() || !off[1].is_number_unsigned())
      throw bad("data_offsets must be [begin, end]");
    it.begin = off[0].get<std::uint64_t>();
    it.end = off[1].get<std::uint64_t>();
    if (it.end < it.begin) throw bad("data_offsets end precedes begin");
    if (it.end - it.begin != expected)
      throw bad("shape " + shape_string(it.tensor.shape) + " needs " + std::to_string(expected) + " bytes, offsets span " +
                std::to_string(it.end - it.begin));
    items.push_back(std::move(it));
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.begin < b.begin; });
  std::uint64_t cursor = 0;
  for (const auto& it : items) {
    if (it.begin < cursor) throw Error(ErrorCode::OverlappingOffsets, "tensor '" + it.name + "' overlaps its predecessor");
    if (it.begin > cursor) throw Error(ErrorCode::SchemaError, "gap in data region before tensor '" + it.name + "'");
    if (it.end > region) throw Error(ErrorCode::TruncatedFile, "tensor '" + it.name + "' extends past the end of the file");
    cursor = it.end;
  }
  if (cursor != region) throw Error(ErrorCode::SizeMismatch, "TMAP data region has " + std::to_string(region - cursor) + " unclaimed bytes");

  TensorMap m;
  const std::size_t base = 8 + n;
  for (auto& it : items) {
    it.tensor.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(base + it.begin),
                          bytes.begin() + static_cast<std::ptrdiff_t>(base + it.end));
    m.insert(std::move(it.name), std::move(it.tensor));
  }
  return m;
}

TensorMap read_tmap(const fs::path& path) {
  try {
    return decode_tmap(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw e.with_context(path.string());
  }
}

void write_tmap(const fs::path& path, const TensorMap& m) { write_file(path, encode_tmap(m)); }

}  // namespace voxflow::io
