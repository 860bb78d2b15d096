#include <string>

#include "doctest.h"
#include "support.hpp"
#include "voxflow/tensor_io.hpp"

using namespace voxflow;
using namespace voxflow::io;
using testing::code_of;

namespace {

// Hand-assembled VOX1 header, independent of the encoder.
Bytes vox1_header(const char* magic, std::uint16_t version, std::uint8_t dtype, std::uint8_t reserved,
                  std::uint32_t f, std::uint32_t h, std::uint32_t w, std::uint32_t c) {
  Bytes b(magic, magic + 4);
  b.push_back(version & 0xFF);
  b.push_back(version >> 8);
  b.push_back(dtype);
  b.push_back(reserved);
  for (std::uint32_t d : {f, h, w, c})
    for (int k = 0; k < 4; ++k) b.push_back(static_cast<std::uint8_t>(d >> (8 * k)));
  return b;
}

Bytes tmap_bytes(const std::string& json, std::size_t data_len) {
  Bytes b(8);
  std::uint64_t n = json.size();
  for (int k = 0; k < 8; ++k) b[k] = static_cast<std::uint8_t>(n >> (8 * k));
  b.insert(b.end(), json.begin(), json.end());
  b.resize(b.size() + data_len, 0xAB);
  return b;
}

Tensor random_tensor(testing::Rng& rng) {
  Tensor t;
  t.dtype = static_cast<TensorDType>(rng() % 3);
  const std::size_t rank = rng() % 5;
  for (std::size_t i = 0; i < rank; ++i) t.shape.push_back(rng() % 4);
  t.data.resize(t.elements() * tensor_dtype_size(t.dtype));
  for (auto& x : t.data) x = static_cast<std::uint8_t>(rng());
  return t;
}

}  // namespace

TEST_CASE("VOX1 layout matches a hand-built header") {
  const Volume v = Volume::from_u8({1, 2, 1, 1}, {7, 9});
  Bytes expected = vox1_header("VOX1", 1, 0, 0, 1, 2, 1, 1);
  expected.push_back(7);
  expected.push_back(9);
  CHECK(encode_vox1(v) == expected);
  CHECK(decode_vox1(expected) == v);

  const Volume f = Volume::from_f32({1, 1, 1, 1}, {1.0f});
  Bytes fe = vox1_header("VOX1", 1, 1, 0, 1, 1, 1, 1);
  for (std::uint8_t x : {0x00, 0x00, 0x80, 0x3F}) fe.push_back(x);
  CHECK(encode_vox1(f) == fe);
}

TEST_CASE("VOX1 round trip through a file") {
  testing::Rng rng(1);
  testing::TempDir dir("vox1");
  const Volume v = testing::random_u8(rng, {3, 4, 5, 1});
  write_vox1(dir / "a.vox", v);
  const Bytes bytes = read_file(dir / "a.vox");
  CHECK(bytes.size() == kVox1HeaderSize + 60);
  const Volume back = read_vox1(dir / "a.vox");
  CHECK(back == v);
  CHECK(encode_vox1(back) == bytes);
}

TEST_CASE("VOX1 decoding errors") {
  Bytes good = vox1_header("VOX1", 1, 0, 0, 2, 2, 2, 1);
  good.resize(good.size() + 8);
  CHECK_NOTHROW(decode_vox1(good));

  Bytes magic = good;
  magic[3] = '2';
  CHECK(code_of([&] { decode_vox1(magic); }) == ErrorCode::BadMagic);

  Bytes truncated = good;
  truncated.pop_back();  // 7 data bytes
  CHECK(code_of([&] { decode_vox1(truncated); }) == ErrorCode::TruncatedFile);
  CHECK(code_of([&] { decode_vox1(Bytes(good.begin(), good.begin() + 10)); }) == ErrorCode::TruncatedFile);

  Bytes trailing = good;
  trailing.push_back(0);
  CHECK(code_of([&] { decode_vox1(trailing); }) == ErrorCode::SizeMismatch);

  Bytes dtype = good;
  dtype[6] = 2;
  CHECK(code_of([&] { decode_vox1(dtype); }) == ErrorCode::DtypeUnknown);

  Bytes version = good;
  version[4] = 2;
  CHECK(code_of([&] { decode_vox1(version); }) == ErrorCode::UnsupportedVersion);
  Bytes reserved = good;
  reserved[7] = 1;
  CHECK(code_of([&] { decode_vox1(reserved); }) == ErrorCode::UnsupportedVersion);

  // A huge declaration is rejected from the file length alone.
  const Bytes huge = vox1_header("VOX1", 1, 1, 0, 60000, 60000, 60000, 3);
  CHECK(code_of([&] { decode_vox1(huge); }) == ErrorCode::TruncatedFile);

  // Two channels are a valid VOX1 payload but not a Volume.
  Bytes two = vox1_header("VOX1", 1, 0, 0, 1, 1, 1, 2);
  two.resize(two.size() + 2);
  CHECK(decode_vox1_raw(two).channels == 2);
  CHECK_THROWS_AS(decode_vox1(two), Error);
}

TEST_CASE("TMAP empty map and explicit layout") {
  const Bytes empty = encode_tmap(TensorMap{});
  CHECK(empty == tmap_bytes("{}", 0));
  CHECK(decode_tmap(empty).empty());

  TensorMap m;
  m.insert("b", Tensor::from_f32({2}, {1.0f, -2.0f}));
  m.insert("a", Tensor{TensorDType::U8, {3}, {1, 2, 3}});
  const Bytes enc = encode_tmap(m);
  const std::string json =
      R"({"b":{"dtype":"F32","shape":[2],"data_offsets":[0,8]},"a":{"dtype":"U8","shape":[3],"data_offsets":[8,11]}})";
  Bytes expected = tmap_bytes(json, 0);
  for (std::uint8_t x : {0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x00, 0xC0, 1, 2, 3}) expected.push_back(x);
  CHECK(enc == expected);

  testing::TempDir dir("tmap");
  write_tmap(dir / "m.tmap", m);
  const TensorMap back = read_tmap(dir / "m.tmap");
  CHECK(back == m);
  CHECK(back.entries()[0].first == "b");
  CHECK(encode_tmap(back) == enc);
}

TEST_CASE("TMAP iteration follows offset order") {
  const std::string json =
      R"({"late":{"dtype":"U8","shape":[1],"data_offsets":[2,3]},"early":{"dtype":"U8","shape":[2],"data_offsets":[0,2]}})";
  const TensorMap m = decode_tmap(tmap_bytes(json, 3));
  REQUIRE(m.size() == 2);
  CHECK(m.entries()[0].first == "early");
  CHECK(m.entries()[1].first == "late");
}

TEST_CASE("TMAP metadata entries are skipped") {
  const std::string json = R"({"__metadata__":{"format":"pt"},"w":{"dtype":"F64","shape":[],"data_offsets":[0,8]}})";
  const TensorMap m = decode_tmap(tmap_bytes(json, 8));
  REQUIRE(m.size() == 1);
  CHECK(m.find("w")->shape.empty());
}

TEST_CASE("TMAP decoding errors") {
  const std::string overlap =
      R"({"a":{"dtype":"U8","shape":[4],"data_offsets":[0,4]},"b":{"dtype":"U8","shape":[4],"data_offsets":[2,6]}})";
  CHECK(code_of([&] { decode_tmap(tmap_bytes(overlap, 6)); }) == ErrorCode::OverlappingOffsets);
  CHECK(code_of([&] { decode_tmap(tmap_bytes("{\"a\":", 0)); }) == ErrorCode::JsonMalformed);
  CHECK(code_of([&] { decode_tmap(tmap_bytes("[]", 0)); }) == ErrorCode::JsonMalformed);
  CHECK(code_of([&] { decode_tmap(Bytes{1, 2}); }) == ErrorCode::TruncatedFile);

  Bytes long_header = tmap_bytes("{}", 0);
  long_header[0] = 200;
  CHECK(code_of([&] { decode_tmap(long_header); }) == ErrorCode::TruncatedFile);

  const std::string shape_bytes = R"({"a":{"dtype":"F32","shape":[2],"data_offsets":[0,4]}})";
  CHECK(code_of([&] { decode_tmap(tmap_bytes(shape_bytes, 4)); }) == ErrorCode::SchemaError);
  const std::string gap = R"({"a":{"dtype":"U8","shape":[1],"data_offsets":[1,2]}})";
  CHECK(code_of([&] { decode_tmap(tmap_bytes(gap, 2)); }) == ErrorCode::SchemaError);
  const std::string fine = R"({"a":{"dtype":"U8","shape":[1],"data_offsets":[0,1]}})";
  CHECK(code_of([&] { decode_tmap(tmap_bytes(fine, 2)); }) == ErrorCode::SizeMismatch);
  CHECK(code_of([&] { decode_tmap(tmap_bytes(fine, 0)); }) == ErrorCode::TruncatedFile);
  const std::string dtype = R"({"a":{"dtype":"I32","shape":[1],"data_offsets":[0,4]}})";
  CHECK(code_of([&] { decode_tmap(tmap_bytes(dtype, 4)); }) == ErrorCode::DtypeUnknown);
}

TEST_CASE("PNG stack of gray frames") {
  testing::Rng rng(2);
  testing::TempDir dir("png");
  const Volume v = testing::random_u8(rng, {3, 4, 5, 1});
  write_png_stack(dir / "stack", v);
  CHECK(std::filesystem::exists(dir / "stack" / "frame_00002.png"));
  CHECK(is_png_stack(dir / "stack"));
  CHECK_FALSE(is_png_stack(dir.path()));
  write_text(dir / "stack" / "notes.txt", "ignored");
  const Volume back = read_png_stack(dir / "stack");
  CHECK(back.shape() == Shape{3, 4, 5, 1});
  CHECK(back == v);

  const Volume rgb = testing::random_u8(rng, {2, 3, 2, 3});
  write_png_stack(dir / "rgb", rgb);
  CHECK(read_png_stack(dir / "rgb") == rgb);
}

TEST_CASE("PNG stack errors") {
  testing::Rng rng(3);
  testing::TempDir dir("pngerr");
  const Volume g = testing::random_u8(rng, {1, 4, 5, 1});
  const Volume c = testing::random_u8(rng, {1, 4, 5, 3});
  for (const char* sub : {"gap", "mixed", "size", "none"}) std::filesystem::create_directories(dir / sub);

  write_file(dir / "gap" / "frame_00000.png", encode_png(g, 0));
  write_file(dir / "gap" / "frame_00002.png", encode_png(g, 0));
  CHECK(code_of([&] { read_png_stack(dir / "gap"); }) == ErrorCode::NonContiguousIndices);

  write_file(dir / "mixed" / "frame_00000.png", encode_png(c, 0));
  write_file(dir / "mixed" / "frame_00001.png", encode_png(g, 0));
  CHECK(code_of([&] { read_png_stack(dir / "mixed"); }) == ErrorCode::MixedDimensions);

  write_file(dir / "size" / "frame_00000.png", encode_png(g, 0));
  write_file(dir / "size" / "frame_00001.png", encode_png(testing::random_u8(rng, {1, 5, 4, 1}), 0));
  CHECK(code_of([&] { read_png_stack(dir / "size"); }) == ErrorCode::MixedDimensions);

  CHECK(code_of([&] { read_png_stack(dir / "none"); }) == ErrorCode::IoError);
  CHECK(code_of([&] { encode_png(testing::random_f32(rng, {1, 2, 2, 1}), 0); }) != ErrorCode::IoError);
}

TEST_CASE("prediction CSV parsing") {
  const PredictionSet one = parse_predictions("sample_id,score,label\na,0.7,1\n");
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Prediction{"a", 0.7, 1, std::nullopt});

  const PredictionSet folds = parse_predictions("sample_id,score,label,fold\r\na,0,0,0\r\na,1,1,1");
  REQUIRE(folds.size() == 2);
  CHECK(folds[1].fold == 1);

  try {
    parse_predictions("sample_id,score,label\na,0.5,0\nb,1.3,1\n");
    FAIL("expected a RangeError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RangeError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(code_of([] { parse_predictions("sample_id,score,label\na,0.1,0\na,0.2,1\n"); }) == ErrorCode::SchemaError);
  CHECK_NOTHROW(parse_predictions("sample_id,score,label,fold\na,0.1,0,0\na,0.2,1,1\n"));
  CHECK(code_of([] { parse_predictions("id,score,label\na,0.1,0\n"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_predictions("sample_id,score,label\na,x,0\n"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_predictions("sample_id,score,label\na,0.1,2\n"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_predictions("sample_id,score,label\na,0.1\n"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_predictions("sample_id,score,label\n\na,0.1,0\n"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_predictions("sample_id,score,label\na,nan,0\n"); }) == ErrorCode::RangeError);
  CHECK(code_of([] { parse_predictions("sample_id,score,label,fold\na,0.1,0,-1\n"); }) == ErrorCode::SchemaError);
}

TEST_CASE("probability matrix CSV") {
  const auto m = parse_probmatrix("sample_id,label,p_0,p_1,p_2\nx,1,0.25,0.5,1\ny,0,0,0,0\n");
  CHECK(m.rows() == 2);
  CHECK(m.columns == 3);
  CHECK(m.at(0, 1) == 0.5);
  CHECK(parse_probmatrix(format_probmatrix(m)).values == m.values);
  CHECK(code_of([] { parse_probmatrix("sample_id,label,p_0\nx,1,0.2\n"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_probmatrix("sample_id,label,p_0,p_1\nx,1,0.2,0.3\nx,0,0.1,0.1\n"); }) ==
        ErrorCode::SchemaError);
}

TEST_CASE("double formatting is shortest and exact") {
  CHECK(format_double(0.7) == "0.7");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
}

TEST_CASE("random payloads round-trip bit-exactly") {
  testing::Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Shape s = testing::random_shape(rng, 6);
    const Volume v = trial % 2 ? testing::random_u8(rng, s) : testing::random_f32(rng, s);
    const Bytes enc = encode_vox1(v);
    REQUIRE(enc.size() == kVox1HeaderSize + v.bytes().size());
    REQUIRE(decode_vox1(enc) == v);
    REQUIRE(encode_vox1(decode_vox1(enc)) == enc);

    // Arbitrary float bit patterns, NaNs included, survive the raw decoder.
    Bytes raw = vox1_header("VOX1", 1, 1, 0, 1, 1, 2, 5);
    Bytes payload(40);
    for (auto& x : payload) x = static_cast<std::uint8_t>(rng());
    raw.insert(raw.end(), payload.begin(), payload.end());
    REQUIRE(decode_vox1_raw(raw).data == payload);

    TensorMap m;
    const std::size_t n = rng() % 5;
    for (std::size_t i = 0; i < n; ++i) m.insert("t" + std::to_string(i) + "." + std::to_string(rng() % 100), random_tensor(rng));
    const Bytes tm = encode_tmap(m);
    REQUIRE(decode_tmap(tm) == m);
    REQUIRE(encode_tmap(decode_tmap(tm)) == tm);

    PredictionSet p(1 + rng() % 30);
    const bool with_fold = rng() % 2;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i].sample_id = "id_" + std::to_string(i) + "-" + std::to_string(rng() % 1000);
      p[i].score = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      p[i].label = static_cast<int>(rng() % 2);
      if (with_fold) p[i].fold = static_cast<int>(rng() % 5);
    }
    const std::string text = format_predictions(p);
    REQUIRE(parse_predictions(text) == p);
    REQUIRE(format_predictions(parse_predictions(text)) == text);
  }
}
