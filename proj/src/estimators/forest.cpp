#include "cladbench/estimators/forest.hpp"

#include "cladbench/error.hpp"
#include "cladbench/parallel.hpp"

namespace clad {

Vector ForestModel::predict(const Matrix& x) const {
  Vector out = Vector::Zero(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double* row = x.row(r).data();
    double acc = 0.0;
    for (const auto& tree : trees_) {
      const double v = tree.predict_row(row);
      acc += classify_ ? (v > 0.5 ? 1.0 : 0.0) : v;
    }
    out(r) = acc / static_cast<double>(trees_.size());
  }
  return out;
}

Json ForestModel::parameters() const {
  Json trees = Json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return Json{{"trees", trees}};
}

std::unique_ptr<ForestModel> ForestModel::from_json(const Json& j, bool classify) {
  std::vector<DecisionTree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(DecisionTree::from_json(t));
  return std::make_unique<ForestModel>(std::move(trees), classify);
}

std::unique_ptr<Estimator> fit_forest_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                const Vector& y, FitNotes& notes,
                                                unsigned threads) {
  const bool classify = spec.kind == EstimatorKind::RfClf;
  const TreeParams params = tree_params_from(spec, classify);
  const auto n_trees = static_cast<std::size_t>(spec.integer("n_estimators"));
  const bool bootstrap = spec.integer("bootstrap") != 0;
  const auto n = static_cast<std::size_t>(x.rows());

  std::vector<DecisionTree> trees(n_trees);
  parallel_for(n_trees, threads, [&](std::size_t t) {
    Rng rng(tree_stream_seed(spec.seed, t));
    Vector weights = Vector::Ones(x.rows());
    if (bootstrap) {
      weights.setZero();
      for (std::size_t draw = 0; draw < n; ++draw) weights(static_cast<Eigen::Index>(rng.index(n))) += 1.0;
    }
    trees[t] = DecisionTree::fit(x, y, weights, params, rng);
  });
  notes["bootstrap"] = bootstrap ? "true" : "false";
  return std::make_unique<ForestModel>(std::move(trees), classify);
}

}  // namespace clad
