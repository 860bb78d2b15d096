#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "voxflow/metrics.hpp"
#include "voxflow/random.hpp"

namespace voxflow::reliability {

/// Non-decreasing step function fitted by isotonic regression.
/// Evaluation is left-continuous: a score maps to the value of the first
/// breakpoint >= score, clamped at both ends.
struct IsotonicModel {
  std::vector<double> breakpoints;  // strictly increasing
  std::vector<double> values;       // non-decreasing, in [0, 1]

  double operator()(double score) const noexcept;
};

/// Least-squares non-decreasing fit of labels against scores by pool-adjacent-
/// violators. Tied scores are merged (weighted) first. Throws OneClassOnly.
IsotonicModel isotonic_fit(const PredictionSet& p);

/// Weighted PAV on an already ordered sequence; returns one fitted value per input.
std::vector<double> pav(const std::vector<double>& y, const std::vector<double>& w);

double isotonic_apply(const IsotonicModel& m, double score) noexcept;
PredictionSet isotonic_apply(const IsotonicModel& m, const PredictionSet& p);

struct CalibrationSplit {
  IsotonicModel model;     // fitted on the first half
  PredictionSet holdout;   // second half, raw scores
  PredictionSet calibrated;  // second half, calibrated scores
};

/// Shuffles, fits on the first half, calibrates the second. Reshuffles (bounded)
/// until both halves contain both classes; throws SplitInfeasible otherwise.
CalibrationSplit calibrate_split(const PredictionSet& p, RandomStream& rng, int max_retries = 100);

struct ReliabilityBin {
  double lo = 0.0, hi = 0.0;
  std::optional<double> mean_pred;  // empty when count == 0
  std::optional<double> pos_rate;
  std::size_t count = 0;
};

/// Equal-width bins on [0, 1]; the last bin is closed on the right.
std::vector<ReliabilityBin> reliability_bins(const PredictionSet& p, std::size_t n_bins = 10);

/// Count-weighted mean |mean_pred - pos_rate| over occupied bins.
double calibration_error(const PredictionSet& p, std::size_t n_bins = 10);

/// Rows are samples, columns repeated stochastic predictions.
struct ProbMatrix {
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::size_t columns = 0;
  std::vector<double> values;  // row-major, ids.size() x columns

  std::size_t rows() const noexcept { return ids.size(); }
  double at(std::size_t r, std::size_t c) const noexcept { return values[r * columns + c]; }
  void validate() const;
};

enum class SpreadMeasure {
  StdDev,  // population standard deviation across columns
  Range,   // max - min across columns
};

struct SampleSpread {
  double mean = 0.0, std = 0.0, range = 0.0, spread = 0.0;
};

struct ClassSpread {
  std::size_t count = 0;
  double mean_spread = 0.0;
  double std_spread = 0.0;  // population
};

struct DropoutStats {
  std::vector<SampleSpread> samples;
  ClassSpread negative;  // label 0
  ClassSpread positive;  // label 1
};

DropoutStats mc_dropout_stats(const ProbMatrix& m, SpreadMeasure measure = SpreadMeasure::StdDev);

}  // namespace voxflow::reliability
