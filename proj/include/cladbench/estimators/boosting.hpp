#pragma once

#include <memory>
#include <vector>

#include "cladbench/estimators/tree.hpp"

namespace clad {

inline constexpr double kProbabilityClamp = 1e-12;

/// Additive tree ensemble F(x) = F0 + lr * sum_t tree_t(x). Regression
/// returns F; classification returns the logistic of F.
class BoostingModel final : public Estimator {
 public:
  BoostingModel(double initial, double learning_rate, std::vector<DecisionTree> stages,
                bool classify)
      : initial_(initial), learning_rate_(learning_rate), stages_(std::move(stages)),
        classify_(classify) {}

  Vector predict(const Matrix& x) const override;
  Vector raw_score(const Matrix& x) const;
  Json parameters() const override;
  static std::unique_ptr<BoostingModel> from_json(const Json& j, bool classify);

  double initial() const { return initial_; }
  std::size_t stage_count() const { return stages_.size(); }

 private:
  double initial_;
  double learning_rate_;
  std::vector<DecisionTree> stages_;
  bool classify_;
};

std::unique_ptr<Estimator> fit_boosting_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                  const Vector& y, FitNotes& notes);

}  // namespace clad
