#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "voxflow/random.hpp"

namespace voxflow::sampler {

struct SamplerConfig {
  std::size_t batch_size = 8;
  double pos_fraction = 0.25;
  std::vector<std::uint8_t> labels;  // 0 or 1 per sample index
  std::uint64_t seed = 0;
};

/// round(pos_fraction * batch_size), halves rounded up.
std::size_t positives_per_batch(const SamplerConfig& cfg);

/// Class-balanced batch generator.
///
/// Each class is drawn from its own shuffled pool, consumed in order and
/// reshuffled when exhausted (one pass over a pool is an epoch). No index
/// repeats within a batch or within an epoch of its class; the minority
/// class is therefore reused across batches once its pool runs out.
class BalancedSampler {
 public:
  /// Throws InvalidArgument for a malformed config and InfeasibleBatch when a
  /// class has fewer samples than its per-batch quota.
  explicit BalancedSampler(SamplerConfig cfg);

  std::vector<std::size_t> next_batch();

  std::size_t positives_per_batch() const noexcept { return n_pos_; }
  std::size_t negatives_per_batch() const noexcept { return n_neg_; }

 private:
  struct Pool {
    std::vector<std::size_t> order;
    std::size_t cursor = 0;
  };
  void draw(Pool& pool, std::size_t count, std::vector<std::size_t>& batch);

  SamplerConfig cfg_;
  std::size_t n_pos_ = 0, n_neg_ = 0;
  RandomStream rng_;
  Pool pos_, neg_;
};

std::vector<std::vector<std::size_t>> batches(const SamplerConfig& cfg, std::size_t n_batches);

}  // namespace voxflow::sampler
