#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxflow/heatmap.hpp"
#include "voxflow/metrics.hpp"
#include "voxflow/reliability.hpp"
#include "voxflow/tensor_map.hpp"
#include "voxflow/volume.hpp"

namespace voxflow::io {

namespace fs = std::filesystem;
using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const fs::path& path);                      // IoError
void write_file(const fs::path& path, std::span<const std::uint8_t> bytes);
std::string read_text(const fs::path& path);
void write_text(const fs::path& path, std::string_view text);

// ---------------------------------------------------------------------------
// VOX1: "VOX1", u16 version = 1, u8 dtype (0 uint8, 1 float32), u8 reserved = 0,
// u32 F, H, W, C; then F*H*W*C raw little-endian values. 24-byte header.

inline constexpr std::size_t kVox1HeaderSize = 24;

/// A VOX1 payload without the channel restriction of Volume.
struct Vox1Raw {
  DType dtype = DType::UInt8;
  std::uint32_t frames = 0, height = 0, width = 0, channels = 0;
  std::vector<std::uint8_t> data;
};

Bytes encode_vox1(const Volume& v);
Vox1Raw decode_vox1_raw(std::span<const std::uint8_t> bytes);  // BadMagic, UnsupportedVersion, DtypeUnknown, TruncatedFile, SizeMismatch
Volume decode_vox1(std::span<const std::uint8_t> bytes);

Volume read_vox1(const fs::path& path);
void write_vox1(const fs::path& path, const Volume& v);

/// Feature volumes are float32 VOX1 files with any channel count.
heatmap::FeatureVolume read_features(const fs::path& path);
Bytes encode_features(const heatmap::FeatureVolume& fv);

// ---------------------------------------------------------------------------
// TMAP: u64 LE header length N, N bytes of JSON {name: {dtype, shape, data_offsets}},
// then the data region. Byte-compatible with the safetensors layout.

Bytes encode_tmap(const TensorMap& m);
TensorMap decode_tmap(std::span<const std::uint8_t> bytes);  // JsonMalformed, OverlappingOffsets, TruncatedFile, SchemaError
TensorMap read_tmap(const fs::path& path);
void write_tmap(const fs::path& path, const TensorMap& m);

// ---------------------------------------------------------------------------
// PNG stacks: frame_00000.png, frame_00001.png, ... 8-bit gray or RGB.

Volume read_png_stack(const fs::path& dir);  // NonContiguousIndices, MixedDimensions
void write_png_stack(const fs::path& dir, const Volume& v);
bool is_png_stack(const fs::path& dir);

/// Single-image helpers for 8-bit gray or RGB; used by the stack functions.
Volume decode_png(std::span<const std::uint8_t> bytes);  // returns a 1-frame volume
Bytes encode_png(const Volume& v, std::size_t frame);

// ---------------------------------------------------------------------------
// CSV formats. Parsing is strict: exact headers, no quoting, no blank lines.

/// sample_id,score,label[,fold]
PredictionSet parse_predictions(std::string_view text);  // SchemaError / RangeError with line numbers
std::string format_predictions(const PredictionSet& p);
PredictionSet read_predictions(const fs::path& path);

/// sample_id,label,p_0,...,p_{T-1}
reliability::ProbMatrix parse_probmatrix(std::string_view text);
std::string format_probmatrix(const reliability::ProbMatrix& m);
reliability::ProbMatrix read_probmatrix(const fs::path& path);

/// bin_lo,bin_hi,mean_pred,pos_rate,count (empty fields for empty bins)
std::string format_reliability(const std::vector<reliability::ReliabilityBin>& bins);

/// Shortest text that parses back to exactly x.
std::string format_double(double x);

}  // namespace voxflow::io
