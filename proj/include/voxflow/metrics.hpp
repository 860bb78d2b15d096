#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voxflow {

struct Prediction {
  std::string sample_id;
  double score = 0.0;  // probability in [0, 1]
  int label = 0;       // 0 or 1
  std::optional<int> fold;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

using PredictionSet = std::vector<Prediction>;

/// Checks score range, binary labels and (id, fold) uniqueness.
/// Throws RangeError / SchemaError.
void validate(const PredictionSet& p);

namespace metrics {

struct Confusion {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& o) noexcept {
    tp += o.tp, fp += o.fp, tn += o.tn, fn += o.fn;
    return *this;
  }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Positive prediction iff score >= threshold. Throws EmptySet.
Confusion confusion(const PredictionSet& p, double threshold = 0.5);

/// Matthews correlation; 0 when any marginal is empty.
double mcc(const Confusion& c) noexcept;
/// TP / (TP + FN), or 0 with no positives.
double tpr(const Confusion& c) noexcept;
/// FP / (FP + TN), or 0 with no negatives.
double fpr(const Confusion& c) noexcept;

/// Area under the ROC curve as the Mann-Whitney statistic with ties counted
/// one half. O(n log n). Throws OneClassOnly.
double roc_auc(const PredictionSet& p);

struct RocPoint {
  double threshold, fpr, tpr;
};
/// ROC points at every distinct score (descending), starting at (0, 0).
std::vector<RocPoint> roc_curve(const PredictionSet& p);

struct CvSummary {
  Confusion confusion;
  double mcc = 0.0;
  double auc = 0.0;
};

/// Confusion counts summed over folds; AUC over the concatenated records.
CvSummary pooled_cv(std::span<const PredictionSet> folds, double threshold = 0.5);

/// Splits a set into folds by its fold column (records without a fold form fold 0).
std::vector<PredictionSet> split_by_fold(const PredictionSet& p);

/// Per-sample mean score across models, keyed by sample id. Throws IdMismatch.
PredictionSet fold_mean(std::span<const PredictionSet> per_model);

}  // namespace metrics
}  // namespace voxflow
