#include "voxflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "voxflow/error.hpp"

namespace voxflow {

void validate(const PredictionSet& p) {
  std::set<std::pair<std::string, int>> seen;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& r = p[i];
    if (!(r.score >= 0.0 && r.score <= 1.0))
      throw Error(ErrorCode::RangeError, "record " + std::to_string(i) + " ('" + r.sample_id + "'): score outside [0, 1]");
    if (r.label != 0 && r.label != 1)
      throw Error(ErrorCode::SchemaError, "record " + std::to_string(i) + " ('" + r.sample_id + "'): label must be 0 or 1");
    if (!seen.emplace(r.sample_id, r.fold.value_or(-1)).second)
      throw Error(ErrorCode::SchemaError, "duplicate sample id '" + r.sample_id + "' within a fold");
  }
}

namespace metrics {

Confusion confusion(const PredictionSet& p, double threshold) {
  if (p.empty()) throw Error(ErrorCode::EmptySet, "confusion of an empty prediction set");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be in [0, 1]");
  Confusion c;
  for (const auto& r : p) {
    const bool pos = r.score >= threshold;
    if (pos)
      (r.label == 1 ? c.tp : c.fp)++;
    else
      (r.label == 1 ? c.fn : c.tn)++;
  }
  return c;
}

double mcc(const Confusion& c) noexcept {
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  const double r = (tp * tn - fp * fn) / std::sqrt(denom);
  return std::clamp(r, -1.0, 1.0);
}

double tpr(const Confusion& c) noexcept {
  const auto d = c.tp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double fpr(const Confusion& c) noexcept {
  const auto d = c.fp + c.tn;
  return d == 0 ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(d);
}

namespace {

std::vector<std::size_t> order_by_score(const PredictionSet& p) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a].score < p[b].score; });
  return idx;
}

}  // namespace

double roc_auc(const PredictionSet& p) {
  std::uint64_t n_pos = 0;
  for (const auto& r : p) n_pos += r.label == 1;
  const std::uint64_t n_neg = p.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::OneClassOnly, "AUC needs both positive and negative labels");

  // Twice the Mann-Whitney U: 2 per (pos > neg) pair, 1 per tie. Exact in integers.
  const auto idx = order_by_score(p);
  std::uint64_t twice_u = 0, neg_below = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    std::uint64_t pos_here = 0, neg_here = 0;
    while (j < idx.size() && p[idx[j]].score == p[idx[i]].score) {
      (p[idx[j]].label == 1 ? pos_here : neg_here)++;
      ++j;
    }
    twice_u += pos_here * (2 * neg_below + neg_here);
    neg_below += neg_here;
    i = j;
  }
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<RocPoint> roc_curve(const PredictionSet& p) {
  std::uint64_t n_pos = 0;
  for (const auto& r : p) n_pos += r.label == 1;
  const std::uint64_t n_neg = p.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::OneClassOnly, "ROC curve needs both classes");
  auto idx = order_by_score(p);
  std::reverse(idx.begin(), idx.end());
  std::vector<RocPoint> pts{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  std::uint64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = p[idx[i]].score;
    while (i < idx.size() && p[idx[i]].score == s) {
      (p[idx[i]].label == 1 ? tp : fp)++;
      ++i;
    }
    pts.push_back({s, static_cast<double>(fp) / static_cast<double>(n_neg), static_cast<double>(tp) / static_cast<double>(n_pos)});
  }
  return pts;
}

CvSummary pooled_cv(std::span<const PredictionSet> folds, double threshold) {
  if (folds.empty()) throw Error(ErrorCode::EmptySet, "pooled_cv needs at least one fold");
  CvSummary s;
  PredictionSet all;
  for (const auto& f : folds) {
    s.confusion += confusion(f, threshold);
    all.insert(all.end(), f.begin(), f.end());
  }
  s.mcc = mcc(s.confusion);
  s.auc = roc_auc(all);
  return s;
}

std::vector<PredictionSet> split_by_fold(const PredictionSet& p) {
  std::map<int, PredictionSet> by_fold;
  for (const auto& r : p) by_fold[r.fold.value_or(0)].push_back(r);
  std::vector<PredictionSet> out;
  for (auto& [_, set] : by_fold) out.push_back(std::move(set));
  return out;
}

PredictionSet fold_mean(std::span<const PredictionSet> per_model) {
  if (per_model.empty()) throw Error(ErrorCode::EmptySet, "fold_mean needs at least one prediction set");
  PredictionSet out = per_model.front();
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!pos.emplace(out[i].sample_id, i).second)
      throw Error(ErrorCode::IdMismatch, "sample id '" + out[i].sample_id + "' repeated in model 0");
  }
  std::vector<double> sums(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) sums[i] = out[i].score;

  for (std::size_t m = 1; m < per_model.size(); ++m) {
    std::vector<char> covered(out.size(), 0);
    std::string extra;
    for (const auto& r : per_model[m]) {
      const auto it = pos.find(r.sample_id);
      if (it == pos.end() || covered[it->second]) {
        extra += (extra.empty() ? "" : ", ") + r.sample_id;
        continue;
      }
      if (r.label != out[it->second].label)
        throw Error(ErrorCode::IdMismatch, "sample '" + r.sample_id + "' has conflicting labels across models");
      covered[it->second] = 1;
      sums[it->second] += r.score;
    }
    std::string missing;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!covered[i]) missing += (missing.empty() ? "" : ", ") + out[i].sample_id;
    if (!missing.empty() || !extra.empty())
      throw Error(ErrorCode::IdMismatch, "model " + std::to_string(m) + ": missing ids [" + missing + "], unexpected ids [" + extra + "]");
  }
  const double n = static_cast<double>(per_model.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].score = per_model.size() == 1 ? sums[i] : sums[i] / n;
  return out;
}

}  // namespace metrics
}  // namespace voxflow
