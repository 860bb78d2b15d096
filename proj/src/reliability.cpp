#include "voxflow/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxflow/error.hpp"

namespace voxflow::reliability {

std::vector<double> pav(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double sum_wy, sum_w;
    std::size_t n;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({w[i] * y[i], w[i], 1});
    // Merge while the previous block's mean is not below the last one's.
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum_wy * b.sum_w < b.sum_wy * a.sum_w) break;
      const Block merged{a.sum_wy + b.sum_wy, a.sum_w + b.sum_w, a.n + b.n};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(y.size());
  for (const Block& b : blocks) fitted.insert(fitted.end(), b.n, b.sum_wy / b.sum_w);
  return fitted;
}

double IsotonicModel::operator()(double score) const noexcept {
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), score);
  if (it == breakpoints.end()) return values.back();
  return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

IsotonicModel isotonic_fit(const PredictionSet& p) {
  std::size_t n_pos = 0;
  for (const auto& r : p) n_pos += r.label == 1;
  if (p.size() < 2 || n_pos == 0 || n_pos == p.size())
    throw Error(ErrorCode::OneClassOnly, "isotonic calibration needs at least two samples and both labels");

  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a].score < p[b].score; });

  IsotonicModel m;
  std::vector<double> y, w;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = p[idx[i]].score;
    double pos = 0.0, cnt = 0.0;
    for (; i < idx.size() && p[idx[i]].score == s; ++i) {
      pos += p[idx[i]].label;
      cnt += 1.0;
    }
    m.breakpoints.push_back(s);
    y.push_back(pos / cnt);
    w.push_back(cnt);
  }
  m.values = pav(y, w);
  return m;
}

double isotonic_apply(const IsotonicModel& m, double score) noexcept { return m(score); }

PredictionSet isotonic_apply(const IsotonicModel& m, const PredictionSet& p) {
  PredictionSet out = p;
  for (auto& r : out) r.score = m(r.score);
  return out;
}

CalibrationSplit calibrate_split(const PredictionSet& p, RandomStream& rng, int max_retries) {
  if (p.size() < 4) throw Error(ErrorCode::SplitInfeasible, "calibration split needs at least 4 samples");
  std::vector<std::size_t> idx(p.size());
  const std::size_t half = p.size() / 2;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = idx.size() - 1; i > 0; --i)
      std::swap(idx[i], idx[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    PredictionSet fit, holdout;
    for (std::size_t i = 0; i < idx.size(); ++i) (i < half ? fit : holdout).push_back(p[idx[i]]);
    auto both = [](const PredictionSet& s) {
      const auto pos = std::count_if(s.begin(), s.end(), [](const Prediction& r) { return r.label == 1; });
      return pos > 0 && static_cast<std::size_t>(pos) < s.size();
    };
    if (!both(fit) || !both(holdout)) continue;
    CalibrationSplit out;
    out.model = isotonic_fit(fit);
    out.calibrated = isotonic_apply(out.model, holdout);
    out.holdout = std::move(holdout);
    return out;
  }
  throw Error(ErrorCode::SplitInfeasible,
              "no split with both classes in each half after " + std::to_string(max_retries) + " attempts");
}

std::vector<ReliabilityBin> reliability_bins(const PredictionSet& p, std::size_t n_bins) {
  if (n_bins < 2) throw Error(ErrorCode::InvalidArgument, "reliability diagram needs at least 2 bins");
  std::vector<ReliabilityBin> bins(n_bins);
  std::vector<double> sum_pred(n_bins, 0.0), sum_pos(n_bins, 0.0);
  const double n = static_cast<double>(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    bins[b].lo = static_cast<double>(b) / n;
    bins[b].hi = static_cast<double>(b + 1) / n;
  }
  for (const auto& r : p) {
    auto b = static_cast<std::size_t>(std::floor(r.score * n));
    b = std::min(b, n_bins - 1);
    bins[b].count++;
    sum_pred[b] += r.score;
    sum_pos[b] += r.label;
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (bins[b].count == 0) continue;
    const auto c = static_cast<double>(bins[b].count);
    bins[b].mean_pred = sum_pred[b] / c;
    bins[b].pos_rate = sum_pos[b] / c;
  }
  return bins;
}

double calibration_error(const PredictionSet& p, std::size_t n_bins) {
  if (p.empty()) throw Error(ErrorCode::EmptySet, "calibration error of an empty set");
  double err = 0.0;
  for (const auto& b : reliability_bins(p, n_bins))
    if (b.count) err += static_cast<double>(b.count) * std::abs(*b.mean_pred - *b.pos_rate);
  return err / static_cast<double>(p.size());
}

void ProbMatrix::validate() const {
  if (columns < 2) throw Error(ErrorCode::SchemaError, "probability matrix needs at least 2 columns");
  if (labels.size() != ids.size() || values.size() != ids.size() * columns)
    throw Error(ErrorCode::SchemaError, "probability matrix dimensions are inconsistent");
  for (std::size_t r = 0; r < rows(); ++r) {
    if (labels[r] != 0 && labels[r] != 1) throw Error(ErrorCode::SchemaError, "row " + std::to_string(r) + ": label must be 0 or 1");
    for (std::size_t c = 0; c < columns; ++c) {
      const double x = at(r, c);
      if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::RangeError, "row " + std::to_string(r) + ": probability outside [0, 1]");
    }
  }
}

DropoutStats mc_dropout_stats(const ProbMatrix& m, SpreadMeasure measure) {
  m.validate();
  DropoutStats out;
  out.samples.resize(m.rows());
  std::vector<double> row(m.columns);
  const double T = static_cast<double>(m.columns);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    // Sorted so the result does not depend on column order.
    std::copy_n(m.values.begin() + static_cast<std::ptrdiff_t>(r * m.columns), m.columns, row.begin());
    std::sort(row.begin(), row.end());
    const bool constant = row.front() == row.back();
    const double mean = constant ? row.front() : std::accumulate(row.begin(), row.end(), 0.0) / T;
    double ss = 0.0;
    for (double x : row) ss += (x - mean) * (x - mean);
    SampleSpread& s = out.samples[r];
    s.mean = mean;
    s.std = std::sqrt(ss / T);
    s.range = row.back() - row.front();
    s.spread = measure == SpreadMeasure::StdDev ? s.std : s.range;
  }
  for (int label : {0, 1}) {
    ClassSpread& c = label == 0 ? out.negative : out.positive;
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (m.labels[r] == label) sum += out.samples[r].spread, c.count++;
    if (c.count == 0) continue;
    c.mean_spread = sum / static_cast<double>(c.count);
    double ss = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (m.labels[r] == label) ss += (out.samples[r].spread - c.mean_spread) * (out.samples[r].spread - c.mean_spread);
    c.std_spread = std::sqrt(ss / static_cast<double>(c.count));
  }
  return out;
}

}  // namespace voxflow::reliability
