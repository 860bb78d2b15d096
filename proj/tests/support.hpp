#pragma once

// Shared fixtures for the unit tests. Generators use std::mt19937_64 so that the
// test inputs never depend on the library's own random stream.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "voxflow/metrics.hpp"
#include "voxflow/volume.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline voxflow::Volume random_u8(Rng& rng, voxflow::Shape s) {
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<std::uint8_t> data(s.elements());
  for (auto& x : data) x = static_cast<std::uint8_t>(d(rng));
  return voxflow::Volume::from_u8(s, std::move(data));
}

inline voxflow::Volume random_f32(Rng& rng, voxflow::Shape s, float lo = -10.f, float hi = 10.f) {
  std::uniform_real_distribution<float> d(lo, hi);
  std::vector<float> data(s.elements());
  for (auto& x : data) x = d(rng);
  return voxflow::Volume::from_f32(s, std::move(data));
}

inline voxflow::Shape random_shape(Rng& rng, std::size_t max_extent = 9) {
  std::uniform_int_distribution<std::size_t> e(1, max_extent);
  std::bernoulli_distribution rgb(0.3);
  return {e(rng), e(rng), e(rng), rgb(rng) ? 3u : 1u};
}

/// Prediction set with scores on a coarse grid (so ties are common) and both labels present
/// when n >= 2 and force_both is set.
inline voxflow::PredictionSet random_predictions(Rng& rng, std::size_t n, bool force_both = true, int grid = 20) {
  std::uniform_int_distribution<int> score(0, grid);
  std::bernoulli_distribution label(0.4);
  voxflow::PredictionSet p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i].sample_id = "s" + std::to_string(i);
    p[i].score = score(rng) / static_cast<double>(grid);
    p[i].label = label(rng) ? 1 : 0;
  }
  if (force_both && n >= 2) {
    p[0].label = 0;
    p[1].label = 1;
  }
  return p;
}

/// Runs fn and returns the code of the voxflow::Error it throws. Fails the test if nothing is thrown.
inline voxflow::ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const voxflow::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a voxflow::Error");
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("voxflow_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
