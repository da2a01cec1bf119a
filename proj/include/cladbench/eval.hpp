#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cladbench/data.hpp"
#include "cladbench/estimator.hpp"
#include "cladbench/estimator_spec.hpp"
#include "cladbench/features.hpp"
#include "cladbench/models.hpp"

namespace clad {

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// All metrics throw ShapeError on a length mismatch and EmptyInputError on
// empty input.
double r2_score(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);
double mse(std::span<const double> actual, std::span<const double> predicted);
// Labels must be exactly 0 or 1, otherwise ValidationError.
double accuracy(std::span<const double> actual, std::span<const double> predicted);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // predict 1 iff score >= threshold; first point is +inf
};

std::vector<RocPoint> roc_curve(std::span<const double> actual, std::span<const double> scores);
double auc(const std::vector<RocPoint>& roc);

struct Confusion {
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;

  std::size_t total() const { return tn + fp + fn + tp; }
  double accuracy() const { return static_cast<double>(tn + tp) / static_cast<double>(total()); }
  bool operator==(const Confusion&) const = default;
};

// Rows are ground truth, columns predictions: [[tn, fp], [fn, tp]].
Confusion confusion_matrix(std::span<const double> actual, std::span<const double> predicted);

struct RegressionReport {
  EstimatorKind kind = EstimatorKind::Ols;
  std::optional<FeatureSet> featureset;
  std::optional<Target> target;
  double r2 = 0.0;
  double mae = 0.0;
  std::vector<std::pair<double, double>> parity;  // (actual, predicted)
};

struct ClassificationReport {
  EstimatorKind kind = EstimatorKind::LogReg;
  std::optional<FeatureSet> featureset;
  double accuracy = 0.0;
  double auc = 0.0;
  std::vector<RocPoint> roc;
  Confusion confusion;
};

RegressionReport evaluate_regression(const TrainedModel& model, const Matrix& x, const Vector& y);
ClassificationReport evaluate_classification(const TrainedModel& model, const Matrix& x,
                                             const Vector& y);

struct SplitInfo {
  std::uint64_t seed = 0;
  std::optional<double> ratio;
  std::optional<std::size_t> k;
};

Json report_to_json(const RegressionReport& report, const SplitInfo& split);
Json report_to_json(const ClassificationReport& report, const SplitInfo& split);

/// Train/test matrices for one target, raw (unnormalized) features.
struct Holdout {
  Matrix x_train;
  Vector y_train;
  Matrix x_test;
  Vector y_test;
  SplitIndices split;
};

Holdout make_holdout(const Dataset& dataset, FeatureSet featureset, Target target,
                     double test_fraction, std::uint64_t seed);

enum class Scoring { R2, Mse, Accuracy };

struct CvResult {
  std::vector<double> scores;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over folds
  std::size_t k = 0;
  // Normalizer fitted inside each fold, from that fold's training rows only.
  std::vector<NormalizationParams> normalizers;
};

// Folds come from `folds.folds`; every fold refits normalizer and model.
CvResult cross_validate(const EstimatorSpec& spec, const Matrix& raw_x, const Vector& y,
                        const SplitIndices& folds, Scoring scoring, unsigned threads = 1);
// R2 for regression targets, accuracy for quality.
CvResult cross_validate(const EstimatorSpec& spec, const Dataset& dataset, FeatureSet featureset,
                        Target target, std::size_t k, std::uint64_t seed, unsigned threads = 1);

Matrix select_rows(const Matrix& x, std::span<const std::size_t> rows);
Vector select_rows(const Vector& y, std::span<const std::size_t> rows);

}  // namespace clad
