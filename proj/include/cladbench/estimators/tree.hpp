#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "cladbench/estimator.hpp"
#include "cladbench/rng.hpp"

namespace clad {

enum class SplitCriterion { SquaredError, Gini, Entropy };
enum class MaxFeatures { All, Sqrt, Log2 };

struct TreeParams {
  int max_depth = -1;  // -1: unlimited
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::All;
  SplitCriterion criterion = SplitCriterion::SquaredError;
};

// "auto" resolves to all features for regression and sqrt for classification.
TreeParams tree_params_from(const EstimatorSpec& spec, bool classify);
std::size_t features_per_split(MaxFeatures mode, std::size_t dims);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean target, or class-1 fraction
};

/// Binary CART tree. Rows go left when x[feature] <= threshold. Thresholds
/// are midpoints between consecutive distinct values; among equal-gain
/// candidates the lowest feature index, then the lowest threshold, wins.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  // `weights` holds one non-negative weight per row; zero-weight rows are
  // excluded. Per-node feature subsampling draws from `rng`.
  static DecisionTree fit(const Matrix& x, const Vector& y, const Vector& weights,
                          const TreeParams& params, Rng& rng);

  int leaf_of(const double* row) const;
  double predict_row(const double* row) const { return nodes_[leaf_of(row)].value; }
  Vector predict(const Matrix& x) const;

  std::vector<TreeNode>& nodes() { return nodes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  Json to_json() const;
  static DecisionTree from_json(const Json& j);

 private:
  std::vector<TreeNode> nodes_;
};

class TreeModel final : public Estimator {
 public:
  explicit TreeModel(DecisionTree tree) : tree_(std::move(tree)) {}
  Vector predict(const Matrix& x) const override { return tree_.predict(x); }
  Json parameters() const override { return Json{{"tree", tree_.to_json()}}; }
  const DecisionTree& tree() const { return tree_; }

 private:
  DecisionTree tree_;
};

// Row-stream seed shared by a lone tree and tree 0 of a forest.
std::uint64_t tree_stream_seed(std::uint64_t seed, std::size_t tree_index);

std::unique_ptr<Estimator> fit_tree_estimator(const EstimatorSpec& spec, const Matrix& x,
                                              const Vector& y, FitNotes& notes);

}  // namespace clad
