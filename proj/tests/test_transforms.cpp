#include <algorithm>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "support.hpp"
#include "voxflow/random.hpp"
#include "voxflow/transforms.hpp"

using namespace voxflow;
namespace t = voxflow::transforms;

namespace {

std::pair<double, double> min_max(const Volume& v) {
  return v.visit([](auto s) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return std::pair<double, double>(*lo, *hi);
  });
}

double max_abs_diff(const Volume& a, const Volume& b) {
  REQUIRE(a.shape() == b.shape());
  double d = 0.0;
  for (std::size_t f = 0; f < a.shape().frames; ++f)
    for (std::size_t h = 0; h < a.shape().height; ++h)
      for (std::size_t w = 0; w < a.shape().width; ++w)
        for (std::size_t c = 0; c < a.shape().channels; ++c) d = std::max(d, std::abs(a.at(f, h, w, c) - b.at(f, h, w, c)));
  return d;
}

Volume constant_u8(Shape s, std::uint8_t value) {
  return Volume::from_u8(s, std::vector<std::uint8_t>(s.elements(), value));
}

Volume constant_f32(Shape s, float value) { return Volume::from_f32(s, std::vector<float>(s.elements(), value)); }

using RandomTransform = std::function<Volume(const Volume&, RandomStream&)>;

struct Named {
  const char* name;
  RandomTransform fn;
  bool may_change_shape;
};

std::vector<Named> all_random_transforms() {
  return {
      {"rotate_small", [](const Volume& v, RandomStream& r) { return t::rotate_small(v, r); }, false},
      {"elastic", [](const Volume& v, RandomStream& r) { return t::elastic(v, r, {3, 1.5}); }, false},
      {"rotate90", [](const Volume& v, RandomStream& r) { return t::rotate90(v, r); }, true},
      {"flip", [](const Volume& v, RandomStream& r) { return t::flip(v, r); }, false},
      {"grid_dropout", [](const Volume& v, RandomStream& r) { return t::grid_dropout(v, r, {4, 0.5}); }, false},
      {"gaussian_noise", [](const Volume& v, RandomStream& r) { return t::gaussian_noise(v, r); }, false},
      {"random_gamma", [](const Volume& v, RandomStream& r) { return t::random_gamma(v, r); }, false},
      {"crop_from_borders", [](const Volume& v, RandomStream& r) { return t::crop_from_borders(v, r, {0.45}); }, true},
      {"drop_plane", [](const Volume& v, RandomStream& r) { return t::drop_plane(v, r, {0.45}); }, true},
      {"resize", [](const Volume& v, RandomStream&) { return t::resize(v, {{5, 6, 7}, t::Interpolation::Trilinear}); }, true},
  };
}

}  // namespace

// ---------------------------------------------------------------------------
// rotate_small

TEST_CASE("rotate_plane by zero degrees is the identity") {
  testing::Rng rng(1);
  const Volume v = testing::random_f32(rng, {3, 7, 9, 1});
  CHECK(max_abs_diff(t::rotate_plane(v, 0.0), v) == 0.0);
  const Volume u = testing::random_u8(rng, {2, 6, 5, 3});
  CHECK(t::rotate_plane(u, 0.0) == u);
}

TEST_CASE("rotate_plane keeps the center voxel") {
  Volume v(Shape{3, 9, 9, 1}, DType::Float32);
  v.values<float>()[v.offset(1, 4, 4)] = 100.f;
  const Volume r = t::rotate_plane(v, 10.0);
  CHECK(r.shape() == v.shape());
  CHECK(std::abs(r.at(1, 4, 4) - 100.0) < 1e-5);
}

TEST_CASE("rotate_plane by 90 degrees on a square plane matches rotate90") {
  testing::Rng rng(2);
  const Volume v = testing::random_f32(rng, {2, 7, 7, 1});
  const Volume a = t::rotate_plane(v, 90.0);
  // Either rotation sense is a rotation; the bilinear version must agree with one of them.
  const double d1 = max_abs_diff(a, t::rotate90(v, t::Plane::HW, 1));
  const double d3 = max_abs_diff(a, t::rotate90(v, t::Plane::HW, 3));
  CHECK(std::min(d1, d3) < 1e-4);
}

TEST_CASE("rotate_small stays in [min(0, min v), max v]") {
  testing::Rng rng(3);
  RandomStream r(3);
  for (int i = 0; i < 30; ++i) {
    const Volume v = testing::random_f32(rng, {2, 11, 13, 1}, 5.f, 9.f);
    const Volume out = t::rotate_small(v, r, {45.0});
    const auto [lo, hi] = min_max(v);
    const auto [olo, ohi] = min_max(out);
    CHECK(olo >= std::min(0.0, lo) - 1e-5);
    CHECK(ohi <= hi + 1e-5);
  }
}

TEST_CASE("rotate_small rejects bad max_deg") {
  RandomStream r(0);
  const Volume v(Shape{1, 3, 3, 1}, DType::UInt8);
  CHECK_THROWS_AS(t::rotate_small(v, r, {0.0}), Error);
  CHECK_THROWS_AS(t::rotate_small(v, r, {50.0}), Error);
}

// ---------------------------------------------------------------------------
// elastic

TEST_CASE("elastic with a zero lattice is the identity") {
  testing::Rng rng(4);
  const Volume v = testing::random_f32(rng, {5, 6, 7, 3});
  const std::vector<double> zero(4 * 4 * 4 * 3, 0.0);
  CHECK(max_abs_diff(t::elastic_with_lattice(v, 4, zero), v) < 1e-6);
  RandomStream r(1);
  CHECK(max_abs_diff(t::elastic(v, r, {4, 0.0}), v) < 1e-6);
}

TEST_CASE("elastic keeps constant volumes constant") {
  RandomStream r(9);
  const Volume c = constant_f32({6, 6, 6, 1}, 3.25f);
  CHECK(t::elastic(c, r, {4, 6.0}) == c);
  const Volume u = constant_u8({6, 5, 4, 3}, 77);
  CHECK(t::elastic(u, r, {3, 20.0}) == u);
}

TEST_CASE("elastic output lies within the input range") {
  testing::Rng rng(5);
  RandomStream r(5);
  for (int i = 0; i < 20; ++i) {
    const Volume v = testing::random_f32(rng, {8, 9, 10, 1});
    const auto [lo, hi] = min_max(v);
    const auto [olo, ohi] = min_max(t::elastic(v, r, {4, 6.0}));
    CHECK(olo >= lo - 1e-5);
    CHECK(ohi <= hi + 1e-5);
  }
}

TEST_CASE("elastic with a uniform integer shift translates with edge clamping") {
  testing::Rng rng(6);
  const Volume v = testing::random_f32(rng, {4, 5, 6, 1});
  std::vector<double> lattice(2 * 2 * 2 * 3, 0.0);
  for (std::size_t n = 0; n < 8; ++n) lattice[n * 3 + 2] = 1.0;  // +1 along width everywhere
  const Volume out = t::elastic_with_lattice(v, 2, lattice);
  for (std::size_t f = 0; f < 4; ++f)
    for (std::size_t h = 0; h < 5; ++h)
      for (std::size_t w = 0; w < 6; ++w) CHECK(out.at(f, h, w) == doctest::Approx(v.at(f, h, std::min<std::size_t>(w + 1, 5))));
}

// ---------------------------------------------------------------------------
// rotate90 / flip

TEST_CASE("rotate90 basics") {
  testing::Rng rng(7);
  const Volume v = testing::random_u8(rng, {2, 3, 4, 3});
  CHECK(t::rotate90(v, t::Plane::HW, 0) == v);
  CHECK(t::rotate90(v, t::Plane::HW, 1).shape() == Shape{2, 4, 3, 3});
  CHECK(t::rotate90(v, t::Plane::FH, 1).shape() == Shape{3, 2, 4, 3});
  CHECK(t::rotate90(v, t::Plane::FW, 3).shape() == Shape{4, 3, 2, 3});
  for (auto plane : {t::Plane::HW, t::Plane::FH, t::Plane::FW}) {
    Volume r = v;
    for (int i = 0; i < 4; ++i) r = t::rotate90(r, plane, 1);
    CHECK(r == v);
    CHECK(t::rotate90(t::rotate90(v, plane, 1), plane, 3) == v);
    CHECK(t::rotate90(t::rotate90(v, plane, 1), plane, 1) == t::rotate90(v, plane, 2));
  }
}

TEST_CASE("rotate90 in the HW plane matches a loop oracle") {
  testing::Rng rng(8);
  const Volume v = testing::random_u8(rng, {2, 3, 5, 1});
  const Volume r = t::rotate90(v, t::Plane::HW, 1);
  // out[f][i][j] = in[f][j][W-1-i]
  for (std::size_t f = 0; f < 2; ++f)
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) REQUIRE(r.at(f, i, j) == v.at(f, j, 4 - i));
}

TEST_CASE("flip") {
  testing::Rng rng(9);
  const Volume v = testing::random_f32(rng, {3, 4, 5, 3});
  CHECK(t::flip_axes(v, {false, false, false}) == v);
  for (int mask = 1; mask < 8; ++mask) {
    const std::array<bool, 3> axes{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
    CHECK(t::flip_axes(t::flip_axes(v, axes), axes) == v);
  }
  const Volume frames = Volume::from_u8({3, 1, 1, 1}, {0, 1, 2});
  const Volume flipped = t::flip_axes(frames, {true, false, false});
  CHECK(flipped.values<std::uint8_t>()[0] == 2);
  CHECK(flipped.values<std::uint8_t>()[1] == 1);
  CHECK(flipped.values<std::uint8_t>()[2] == 0);
  RandomStream r(1);
  CHECK(t::flip(v, r, {0.0}) == v);
}

// ---------------------------------------------------------------------------
// grid_dropout

namespace {

std::size_t count_zero_voxels(const Volume& v, std::size_t channel) {
  std::size_t n = 0;
  for (std::size_t f = 0; f < v.shape().frames; ++f)
    for (std::size_t h = 0; h < v.shape().height; ++h)
      for (std::size_t w = 0; w < v.shape().width; ++w) n += v.at(f, h, w, channel) == 0.0;
  return n;
}

// Independent re-implementation: a voxel is dropped when every coordinate, shifted by the
// offset, lands in the first `hole` positions of its cell.
Volume grid_dropout_oracle(const Volume& v, std::size_t cell, double ratio, std::array<std::size_t, 3> off) {
  const auto hole = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(cell)));
  std::vector<float> out(v.shape().elements());
  const Shape& s = v.shape();
  for (std::size_t f = 0; f < s.frames; ++f)
    for (std::size_t h = 0; h < s.height; ++h)
      for (std::size_t w = 0; w < s.width; ++w) {
        const bool drop = hole > 0 && (f + cell * 100 - off[0]) % cell < hole && (h + cell * 100 - off[1]) % cell < hole &&
                          (w + cell * 100 - off[2]) % cell < hole;
        for (std::size_t c = 0; c < s.channels; ++c) out[v.offset(f, h, w, c)] = drop ? 0.f : static_cast<float>(v.at(f, h, w, c));
      }
  return Volume::from_f32(s, std::move(out));
}

}  // namespace

TEST_CASE("grid_dropout zero count on the 32^3 fixture") {
  const Volume v = constant_u8({32, 32, 32, 3}, 200);
  const Volume d = t::grid_dropout_at(v, 16, 0.5, {0, 0, 0});
  for (std::size_t c = 0; c < 3; ++c) CHECK(count_zero_voxels(d, c) == 4096);
}

TEST_CASE("grid_dropout limiting ratios") {
  testing::Rng rng(10);
  const Volume v = testing::random_f32(rng, {9, 10, 11, 1}, 1.f, 2.f);
  CHECK(t::grid_dropout_at(v, 4, 0.0, {1, 2, 3}) == v);
  const Volume all = t::grid_dropout_at(v, 4, 1.0, {0, 0, 0});
  CHECK(count_zero_voxels(all, 0) == v.shape().voxels());
}

TEST_CASE("grid_dropout matches a brute-force re-implementation") {
  testing::Rng rng(11);
  std::uniform_int_distribution<std::size_t> cell_d(2, 6), off_d(0, 10);
  std::uniform_real_distribution<double> ratio_d(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const Volume v = testing::random_f32(rng, testing::random_shape(rng, 12), 1.f, 2.f);
    const std::size_t cell = cell_d(rng);
    const double ratio = ratio_d(rng);
    const std::array<std::size_t, 3> off{off_d(rng), off_d(rng), off_d(rng)};
    REQUIRE(t::grid_dropout_at(v, cell, ratio, off) == grid_dropout_oracle(v, cell, ratio, off));
  }
}

// ---------------------------------------------------------------------------
// gaussian_noise

TEST_CASE("gaussian_noise moments on a constant volume") {
  const Volume v = constant_u8({100, 100, 100, 1}, 128);
  RandomStream r(21);
  const Volume out = t::add_gaussian_noise(v, 5.0, r);
  double s1 = 0.0, s2 = 0.0;
  for (std::uint8_t x : out.values<std::uint8_t>()) {
    s1 += x;
    s2 += static_cast<double>(x) * x;
  }
  const double n = 1e6, mean = s1 / n, sd = std::sqrt(s2 / n - mean * mean);
  CHECK(std::abs(mean - 128.0) < 0.05);
  CHECK(std::abs(sd - 5.0) < 0.1);
}

TEST_CASE("gaussian_noise with sigma_max 0 is the identity") {
  testing::Rng rng(12);
  const Volume v = testing::random_u8(rng, {3, 4, 5, 1});
  RandomStream r(2);
  CHECK(t::gaussian_noise(v, r, {0.0}) == v);
  const Volume f = testing::random_f32(rng, {3, 4, 5, 1});
  CHECK(t::gaussian_noise(f, r, {0.0}) == f);
}

// ---------------------------------------------------------------------------
// random_gamma

TEST_CASE("gamma") {
  testing::Rng rng(13);
  const Volume v = testing::random_u8(rng, {3, 4, 5, 3});
  CHECK(t::apply_gamma(v, 1.0) == v);
  const Volume ends = Volume::from_u8({1, 1, 3, 1}, {0, 255, 64});
  for (double g : {0.5, 0.8, 1.2, 2.0, 3.7}) {
    const Volume o = t::apply_gamma(ends, g);
    const auto out = o.values<std::uint8_t>();
    CHECK(out[0] == 0);
    CHECK(out[1] == 255);
  }
  CHECK(t::apply_gamma(ends, 2.0).at(0, 0, 2) == 16);
  RandomStream r(4);
  CHECK(t::random_gamma(v, r, {1.0, 1.0}) == v);
}

TEST_CASE("gamma on float volumes preserves the range") {
  const Volume f = Volume::from_f32({1, 1, 3, 1}, {-2.f, 0.f, 2.f});
  const Volume g = t::apply_gamma(f, 2.0);
  const auto out = g.values<float>();
  CHECK(out[0] == doctest::Approx(-2.0));
  CHECK(out[1] == doctest::Approx(-1.0));  // (0.5)^2 of the span above the minimum
  CHECK(out[2] == doctest::Approx(2.0));
  const Volume c = constant_f32({2, 2, 2, 1}, 4.f);
  RandomStream r(0);
  CHECK(t::random_gamma(c, r) == c);
}

// ---------------------------------------------------------------------------
// crop_from_borders / drop_plane

TEST_CASE("crop_border shift semantics") {
  const Shape s{60, 3, 2, 1};
  std::vector<std::uint8_t> data(s.elements());
  for (std::size_t f = 0; f < 60; ++f)
    for (std::size_t i = 0; i < 6; ++i) data[f * 6 + i] = static_cast<std::uint8_t>(f);
  const Volume v = Volume::from_u8(s, data);
  const Volume lead = t::crop_border(v, Axis::Frames, t::Border::Leading, 6);
  CHECK(lead.shape() == Shape{54, 3, 2, 1});
  CHECK(lead.at(0, 0, 0) == 6);
  const Volume trail = t::crop_border(v, Axis::Frames, t::Border::Trailing, 6);
  CHECK(trail.at(0, 0, 0) == 0);
  CHECK(trail.at(53, 0, 0) == 53);
  CHECK(t::crop_border(v, Axis::Height, t::Border::Leading, 0) == v);
  CHECK_THROWS_AS(t::crop_border(v, Axis::Width, t::Border::Leading, 2), Error);
}

TEST_CASE("crop_from_borders never removes more than its fraction") {
  testing::Rng rng(14);
  RandomStream r(14);
  for (int i = 0; i < 200; ++i) {
    const Volume v = testing::random_u8(rng, testing::random_shape(rng, 20));
    const Volume out = t::crop_from_borders(v, r, {0.45});
    for (Axis a : kSpatialAxes) CHECK(out.shape().extent(a) >= (v.shape().extent(a) + 1) / 2);
  }
}

TEST_CASE("drop_planes keeps order") {
  std::vector<std::uint8_t> data(10);
  for (int i = 0; i < 10; ++i) data[i] = static_cast<std::uint8_t>(i);
  const Volume v = Volume::from_u8({10, 1, 1, 1}, data);
  const Volume out = t::drop_planes(v, Axis::Frames, {7, 3});
  CHECK(out.shape() == Shape{8, 1, 1, 1});
  const std::vector<std::uint8_t> expect{0, 1, 2, 4, 5, 6, 8, 9};
  const auto got = out.values<std::uint8_t>();
  CHECK(std::vector<std::uint8_t>(got.begin(), got.end()) == expect);
  CHECK(t::drop_planes(v, Axis::Frames, {}) == v);
  CHECK_THROWS_AS(t::drop_planes(v, Axis::Frames, {0}), Error);
  CHECK_THROWS_AS(t::drop_planes(v, Axis::Frames, {9}), Error);
  CHECK_THROWS_AS(t::drop_planes(v, Axis::Frames, {3, 3}), Error);
}

TEST_CASE("drop_plane preserves the first and last plane of every axis") {
  testing::Rng rng(15);
  RandomStream r(15);
  for (int i = 0; i < 200; ++i) {
    // Unique values so planes can be identified after dropping.
    const Shape s{3 + std::size_t(i) % 9, 3 + std::size_t(i) % 5, 3 + std::size_t(i) % 7, 1};
    std::vector<float> data(s.elements());
    for (std::size_t k = 0; k < data.size(); ++k) data[k] = static_cast<float>(k);
    const Volume v = Volume::from_f32(s, data);
    const Volume out = t::drop_plane(v, r, {0.45});
    const Shape& o = out.shape();
    CHECK(out.at(0, 0, 0) == v.at(0, 0, 0));
    CHECK(out.at(o.frames - 1, o.height - 1, o.width - 1) == v.at(s.frames - 1, s.height - 1, s.width - 1));
  }
}

TEST_CASE("drop_plane needs an axis of extent 3") {
  RandomStream r(1);
  const Volume v(Shape{2, 2, 2, 1}, DType::UInt8);
  try {
    t::drop_plane(v, r);
    FAIL("expected AxisTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AxisTooShort);
  }
}

// ---------------------------------------------------------------------------
// resize

TEST_CASE("resize identities") {
  testing::Rng rng(16);
  const Volume v = testing::random_u8(rng, {4, 5, 6, 3});
  CHECK(t::resize(v, {4, 5, 6}, t::Interpolation::Nearest) == v);
  CHECK(t::resize(v, {4, 5, 6}, t::Interpolation::Trilinear) == v);
  for (auto mode : {t::Interpolation::Nearest, t::Interpolation::Trilinear}) {
    const Volume c = constant_f32({3, 4, 5, 1}, 2.5f);
    CHECK(t::resize(c, {7, 2, 9}, mode) == constant_f32({7, 2, 9, 1}, 2.5f));
    const Volume u = constant_u8({3, 4, 5, 3}, 201);
    CHECK(t::resize(u, {1, 8, 3}, mode) == constant_u8({1, 8, 3, 3}, 201));
  }
}

TEST_CASE("trilinear resize center equals the corner mean") {
  const std::vector<float> corners{1, 2, 3, 5, 7, 11, 13, 17};
  const Volume v = Volume::from_f32({2, 2, 2, 1}, corners);
  const Volume out = t::resize(v, {3, 3, 3}, t::Interpolation::Trilinear);
  CHECK(out.at(1, 1, 1) == doctest::Approx(59.0 / 8.0).epsilon(1e-6));
  // Corners of the output are the input corners.
  CHECK(out.at(0, 0, 0) == 1.0);
  CHECK(out.at(2, 2, 2) == 17.0);
}

TEST_CASE("nearest resize is idempotent at fixed size and stays in range") {
  testing::Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const Volume v = testing::random_u8(rng, testing::random_shape(rng));
    const Volume once = t::resize(v, {5, 4, 6}, t::Interpolation::Nearest);
    CHECK(t::resize(once, {5, 4, 6}, t::Interpolation::Nearest) == once);
    const Volume f = testing::random_f32(rng, v.shape());
    const auto [lo, hi] = min_max(f);
    const auto [olo, ohi] = min_max(t::resize(f, {7, 3, 8}, t::Interpolation::Trilinear));
    CHECK(olo >= lo - 1e-5);
    CHECK(ohi <= hi + 1e-5);
  }
}

// ---------------------------------------------------------------------------
// Cross-cutting contracts

TEST_CASE("every transform preserves dtype, is pure, and respects the shape contract") {
  testing::Rng rng(18);
  for (const auto& tr : all_random_transforms()) {
    CAPTURE(tr.name);
    for (int i = 0; i < 20; ++i) {
      const Shape s{3 + static_cast<std::size_t>(i % 4), 4 + static_cast<std::size_t>(i % 3), 5, i % 2 ? 3u : 1u};
      const Volume v = i % 3 ? testing::random_u8(rng, s) : testing::random_f32(rng, s, 0.f, 255.f);
      RandomStream r1(1000 + i), r2(1000 + i);
      const Volume a = tr.fn(v, r1), b = tr.fn(v, r2);
      CHECK(a == b);
      CHECK(a.dtype() == v.dtype());
      CHECK(a.shape().channels == s.channels);
      if (!tr.may_change_shape) CHECK(a.shape() == s);
    }
  }
}

TEST_CASE("parameter validation") {
  const Volume v(Shape{4, 4, 4, 1}, DType::UInt8);
  RandomStream r(0);
  CHECK_THROWS_AS(t::grid_dropout_at(v, 1, 0.5, {0, 0, 0}), Error);
  CHECK_THROWS_AS(t::grid_dropout_at(v, 4, 1.5, {0, 0, 0}), Error);
  CHECK_THROWS_AS(t::apply_gamma(v, 0.0), Error);
  CHECK_THROWS_AS(t::flip(v, r, {2.0}), Error);
  CHECK_THROWS_AS(t::resize(v, {0, 1, 1}, t::Interpolation::Nearest), Error);
  CHECK_THROWS_AS(t::elastic(v, r, {1, 1.0}), Error);
}
