#pragma once

#include <memory>
#include <vector>

#include "cladbench/estimators/tree.hpp"

namespace clad {

/// Bagged trees. Regression averages the trees; classification returns the
/// fraction of trees voting class 1 (a tree votes 1 when its leaf fraction
/// exceeds 0.5).
class ForestModel final : public Estimator {
 public:
  ForestModel(std::vector<DecisionTree> trees, bool classify)
      : trees_(std::move(trees)), classify_(classify) {}

  Vector predict(const Matrix& x) const override;
  Json parameters() const override;
  static std::unique_ptr<ForestModel> from_json(const Json& j, bool classify);

  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
  bool classify_;
};

// Trees are grown independently from derived per-tree streams, so the
// result does not depend on `threads`.
std::unique_ptr<Estimator> fit_forest_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                const Vector& y, FitNotes& notes,
                                                unsigned threads = 1);

}  // namespace clad
