#pragma once

#include <memory>
#include <vector>

#include "cladbench/estimators/tree.hpp"

namespace clad {

/// AdaBoost.R2 (regression, weighted-median combination) or binary SAMME
/// (classification, class-1 share of the estimator weights).
class AdaBoostModel final : public Estimator {
 public:
  AdaBoostModel(std::vector<DecisionTree> learners, std::vector<double> weights, bool classify)
      : learners_(std::move(learners)), weights_(std::move(weights)), classify_(classify) {}

  Vector predict(const Matrix& x) const override;
  Json parameters() const override;
  static std::unique_ptr<AdaBoostModel> from_json(const Json& j, bool classify);

  std::size_t learner_count() const { return learners_.size(); }
  const std::vector<DecisionTree>& learners() const { return learners_; }

 private:
  std::vector<DecisionTree> learners_;
  std::vector<double> weights_;
  bool classify_;
};

// Weighted median: smallest value whose cumulative weight reaches half the total.
double weighted_median(std::vector<std::pair<double, double>> value_weight);

std::unique_ptr<Estimator> fit_adaboost_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                  const Vector& y, FitNotes& notes);

}  // namespace clad
