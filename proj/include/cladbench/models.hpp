#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "cladbench/data.hpp"
#include "cladbench/estimator.hpp"
#include "cladbench/estimator_spec.hpp"
#include "cladbench/features.hpp"
#include "cladbench/linalg.hpp"

namespace clad {

struct ModelComplexity {
  std::string expression;
  // symbol -> meaning, only the symbols the expression uses
  std::map<std::string, std::string> symbols;

  bool operator==(const ModelComplexity&) const = default;
};

ModelComplexity complexity_of(EstimatorKind kind);

struct FitMeta {
  std::size_t n_train = 0;
  std::size_t n_features = 0;
  std::optional<FeatureSet> featureset;
  std::optional<Target> target;
  double wall_time_s = 0.0;  // in memory only, never serialized
  FitNotes notes;
};

/// Immutable fitted model: resolved spec, optional input normalizer and the
/// estimator's learned state. Copies share the estimator.
class TrainedModel {
 public:
  static constexpr int kSchemaVersion = 1;

  // X must already be in model space; no normalizer is attached.
  static TrainedModel fit(const EstimatorSpec& spec, const Matrix& x, const Vector& y,
                          unsigned threads = 1);
  // Fits a min-max normalizer on raw_x first and applies it at predict time.
  static TrainedModel fit_pipeline(const EstimatorSpec& spec, const Matrix& raw_x, const Vector& y,
                                   std::optional<FeatureSet> featureset = std::nullopt,
                                   std::optional<Target> target = std::nullopt,
                                   unsigned threads = 1);

  // Regression values, or 0/1 labels (class 1 iff probability > 0.5).
  Vector predict(const Matrix& x) const;
  // Probability of class 1; classifiers only.
  Vector predict_proba(const Matrix& x) const;

  const EstimatorSpec& spec() const { return spec_; }
  EstimatorKind kind() const { return spec_.kind; }
  Task task() const { return task_; }
  const std::optional<NormalizationParams>& normalizer() const { return normalizer_; }
  const FitMeta& meta() const { return meta_; }
  const ModelComplexity& complexity() const { return complexity_; }
  const Estimator& estimator() const { return *estimator_; }

  Json to_json(const Json& provenance = nullptr) const;
  static TrainedModel from_json(const Json& j);

 private:
  TrainedModel() = default;
  Vector raw(const Matrix& x) const;

  EstimatorSpec spec_;
  Task task_ = Task::Regression;
  std::optional<NormalizationParams> normalizer_;
  FitMeta meta_;
  ModelComplexity complexity_;
  std::shared_ptr<const Estimator> estimator_;
};

// Artifacts are a single JSON document. `provenance` (seed, digests) is
// stored verbatim under "provenance" and ignored on load.
std::string model_to_string(const TrainedModel& model, const Json& provenance = nullptr);
TrainedModel model_from_string(const std::string& text);
void save_model(const TrainedModel& model, const std::string& path, const Json& provenance = nullptr);
TrainedModel load_model(const std::string& path);

Json hyperparameters_to_json(const Hyperparameters& params);
Hyperparameters hyperparameters_from_json(const Json& j);

}  // namespace clad
