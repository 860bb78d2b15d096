#include "voxflow/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "voxflow/error.hpp"

namespace voxflow::sampler {

std::size_t positives_per_batch(const SamplerConfig& cfg) {
  return static_cast<std::size_t>(std::floor(cfg.pos_fraction * static_cast<double>(cfg.batch_size) + 0.5));
}

namespace {

void shuffle(std::vector<std::size_t>& v, RandomStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
}

}  // namespace

BalancedSampler::BalancedSampler(SamplerConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  if (cfg_.batch_size < 2) throw Error(ErrorCode::InvalidArgument, "batch size must be >= 2");
  if (!(cfg_.pos_fraction > 0.0 && cfg_.pos_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "positive fraction must be in (0, 1)");
  for (std::size_t i = 0; i < cfg_.labels.size(); ++i) {
    if (cfg_.labels[i] > 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    (cfg_.labels[i] ? pos_ : neg_).order.push_back(i);
  }
  if (pos_.order.empty() || neg_.order.empty())
    throw Error(ErrorCode::InfeasibleBatch, "both classes must be present in the labels");
  n_pos_ = sampler::positives_per_batch(cfg_);
  if (n_pos_ == 0) throw Error(ErrorCode::InfeasibleBatch, "positive fraction yields no positives per batch");
  n_neg_ = cfg_.batch_size - n_pos_;
  if (pos_.order.size() < n_pos_)
    throw Error(ErrorCode::InfeasibleBatch, "need " + std::to_string(n_pos_) + " distinct positives per batch, only " +
                                                std::to_string(pos_.order.size()) + " available");
  if (neg_.order.size() < n_neg_)
    throw Error(ErrorCode::InfeasibleBatch, "need " + std::to_string(n_neg_) + " distinct negatives per batch, only " +
                                                std::to_string(neg_.order.size()) + " available");
  shuffle(pos_.order, rng_);
  shuffle(neg_.order, rng_);
}

void BalancedSampler::draw(Pool& pool, std::size_t count, std::vector<std::size_t>& batch) {
  const std::size_t start = batch.size();
  while (batch.size() - start < count) {
    if (pool.cursor == pool.order.size()) {
      shuffle(pool.order, rng_);
      pool.cursor = 0;
      // Pull indices already in this batch out of the head of the new epoch.
      const auto taken = [&](std::size_t idx) {
        return std::find(batch.begin() + static_cast<std::ptrdiff_t>(start), batch.end(), idx) != batch.end();
      };
      std::stable_partition(pool.order.begin(), pool.order.end(), [&](std::size_t idx) { return !taken(idx); });
    }
    batch.push_back(pool.order[pool.cursor++]);
  }
}

std::vector<std::size_t> BalancedSampler::next_batch() {
  std::vector<std::size_t> batch;
  batch.reserve(cfg_.batch_size);
  draw(pos_, n_pos_, batch);
  draw(neg_, n_neg_, batch);
  shuffle(batch, rng_);
  return batch;
}

std::vector<std::vector<std::size_t>> batches(const SamplerConfig& cfg, std::size_t n_batches) {
  if (n_batches == 0) throw Error(ErrorCode::InvalidArgument, "number of batches must be >= 1");
  BalancedSampler s(cfg);
  std::vector<std::vector<std::size_t>> out(n_batches);
  for (auto& b : out) b = s.next_batch();
  return out;
}

}  // namespace voxflow::sampler
