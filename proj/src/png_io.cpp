#include <png.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>

#include "voxflow/tensor_io.hpp"

namespace voxflow::io {

namespace {

struct ImageGuard {
  png_image* img;
  ~ImageGuard() { png_image_free(img); }
};

/// frame_NNNNN.png -> NNNNN, or -1 for any other file name.
long frame_index(const std::string& name) {
  constexpr std::string_view prefix = "frame_", suffix = ".png";
  if (name.size() != prefix.size() + 5 + suffix.size()) return -1;
  if (name.compare(0, prefix.size(), prefix) != 0) return -1;
  if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) return -1;
  long idx = 0;
  for (std::size_t i = prefix.size(); i < prefix.size() + 5; ++i) {
    if (name[i] < '0' || name[i] > '9') return -1;
    idx = idx * 10 + (name[i] - '0');
  }
  return idx;
}

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.png", i);
  return buf;
}

}  // namespace

Volume decode_png(std::span<const std::uint8_t> bytes) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  ImageGuard guard{&img};
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
    throw Error(ErrorCode::IoError, std::string("PNG decode failed: ") + img.message);
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const Shape shape{1, img.height, img.width, color ? 3u : 1u};
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, data.data(), 0, nullptr))
    throw Error(ErrorCode::IoError, std::string("PNG decode failed: ") + img.message);
  return Volume::from_u8(shape, std::move(data));
}

Bytes encode_png(const Volume& v, std::size_t frame) {
  if (v.dtype() != DType::UInt8) throw Error(ErrorCode::InvalidArgument, "PNG output requires a uint8 volume");
  const Shape& s = v.shape();
  if (frame >= s.frames) throw Error(ErrorCode::RegionOutOfBounds, "frame " + std::to_string(frame) + " out of range");
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(s.width);
  img.height = static_cast<png_uint_32>(s.height);
  img.format = s.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  ImageGuard guard{&img};
  const std::uint8_t* src = v.values<std::uint8_t>().data() + v.offset(frame, 0, 0);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, src, 0, nullptr))
    throw Error(ErrorCode::IoError, std::string("PNG encode failed: ") + img.message);
  Bytes out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, src, 0, nullptr))
    throw Error(ErrorCode::IoError, std::string("PNG encode failed: ") + img.message);
  out.resize(size);
  return out;
}

bool is_png_stack(const fs::path& dir) {
  std::error_code ec;
  return fs::is_directory(dir, ec) && fs::is_regular_file(dir / frame_name(0), ec);
}

Volume read_png_stack(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "'" + dir.string() + "' is not a directory");
  std::map<long, fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const long idx = frame_index(entry.path().filename().string());
    if (idx >= 0) frames.emplace(idx, entry.path());
  }
  if (frames.empty()) throw Error(ErrorCode::IoError, "no frame_NNNNN.png files in '" + dir.string() + "'");
  long expected = 0;
  for (const auto& [idx, path] : frames) {
    if (idx != expected)
      throw Error(ErrorCode::NonContiguousIndices, "'" + dir.string() + "': expected " + frame_name(expected) + ", found " + path.filename().string());
    ++expected;
  }

  Shape shape{};
  std::vector<std::uint8_t> data;
  for (const auto& [idx, path] : frames) {
    Volume f;
    try {
      f = decode_png(read_file(path));
    } catch (const Error& e) {
      throw e.with_context(path.string());
    }
    if (idx == 0) {
      shape = f.shape();
      shape.frames = frames.size();
      data.reserve(shape.elements());
    } else if (f.shape().height != shape.height || f.shape().width != shape.width || f.shape().channels != shape.channels) {
      throw Error(ErrorCode::MixedDimensions, path.string() + ": " + to_string(f.shape()) + " differs from first frame");
    }
    const auto px = f.values<std::uint8_t>();
    data.insert(data.end(), px.begin(), px.end());
  }
  return Volume::from_u8(shape, std::move(data));
}

void write_png_stack(const fs::path& dir, const Volume& v) {
  if (v.dtype() != DType::UInt8) throw Error(ErrorCode::InvalidArgument, "PNG output requires a uint8 volume");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  for (std::size_t f = 0; f < v.shape().frames; ++f) write_file(dir / frame_name(f), encode_png(v, f));
}

}  // namespace voxflow::io
