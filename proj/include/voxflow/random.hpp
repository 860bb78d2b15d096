#pragma once

#include <array>
#include <cstdint>

namespace voxflow {

/// SplitMix64 finalizer. Used for seed expansion and child-stream derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Portable random stream: xoshiro256** state expanded from a 64-bit seed
/// with SplitMix64. All derived draws (reals, bounded integers, normals) are
/// implemented here rather than through <random> distributions, whose output
/// is implementation-defined, so sequences match on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  /// Stream for the given index. Depends only on this stream's seed and the
  /// index, never on how many draws the parent has made.
  RandomStream child(std::uint64_t index) const noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Uniform integer in the closed range [lo, hi]. Unbiased (rejection).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
  /// Standard normal (128-layer ziggurat, Doornik's variant).
  double normal() noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

/// Free-function form of RandomStream::child.
inline RandomStream child_stream(const RandomStream& parent, std::uint64_t index) noexcept {
  return parent.child(index);
}

}  // namespace voxflow
