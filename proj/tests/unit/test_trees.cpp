#include <set>

#include "cladbench/error.hpp"
#include "cladbench/estimators/adaboost.hpp"
#include "cladbench/estimators/boosting.hpp"
#include "cladbench/estimators/forest.hpp"
#include "cladbench/estimators/tree.hpp"
#include "cladbench/models.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clad;
using testutil::random_matrix;

namespace {

Vector threshold_labels(const Matrix& x, double cut) {
  Vector y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) y(i) = x(i, 0) > cut ? 1.0 : 0.0;
  return y;
}

}  // namespace

TEST_SUITE("models.trees") {

TEST_CASE("decision tree basics") {
  const Matrix xor_x = testutil::rows_of({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const Vector xor_y = testutil::vec({0, 1, 1, 0});
  const auto clf = TrainedModel::fit({EstimatorKind::DtClf, {{"max_depth", std::int64_t{2}}}}, xor_x, xor_y);
  CHECK(clf.predict(xor_x) == xor_y);
  const auto reg = TrainedModel::fit({EstimatorKind::DtReg, {{"max_depth", std::int64_t{2}}}}, xor_x, xor_y);
  CHECK(reg.predict(xor_x) == xor_y);

  // pure target: a single leaf even with depth budget left
  const Matrix x = random_matrix(10, 2, 1);
  const auto pure = TrainedModel::fit({EstimatorKind::DtReg}, x, Vector::Constant(10, 4.0));
  CHECK(dynamic_cast<const TreeModel&>(pure.estimator()).tree().nodes().size() == 1);

  CHECK_THROWS_AS(TrainedModel::fit({EstimatorKind::DtReg, {{"max_depth", std::int64_t{0}}}}, x, x.col(0)), SpecError);
  const auto single = TrainedModel::fit({EstimatorKind::DtReg}, testutil::rows_of({{0.3, 0.4}}), testutil::vec({7}));
  CHECK(single.predict(x) == Vector::Constant(10, 7.0));
}

TEST_CASE("unrestricted tree interpolates distinct rows") {
  const Matrix x = random_matrix(60, 3, 2);
  Rng rng(3);
  Vector y(60);
  for (int i = 0; i < 60; ++i) y(i) = rng.normal();
  CHECK(TrainedModel::fit({EstimatorKind::DtReg}, x, y).predict(x) == y);
  Vector labels(60);
  for (int i = 0; i < 60; ++i) labels(i) = rng.uniform() < 0.4 ? 1.0 : 0.0;
  CHECK(TrainedModel::fit({EstimatorKind::DtClf}, x, labels).predict(x) == labels);
}

TEST_CASE("midpoint thresholds") {
  const Matrix x = testutil::rows_of({{1}, {3}});
  const auto m = TrainedModel::fit({EstimatorKind::DtReg}, x, testutil::vec({0, 1}));
  const auto& nodes = dynamic_cast<const TreeModel&>(m.estimator()).tree().nodes();
  CHECK(nodes[0].threshold == 2.0);
}

TEST_CASE("forest reductions") {
  const Matrix x = random_matrix(50, 4, 5);
  const Vector y = x.col(0) + x.col(1).cwiseProduct(x.col(2));
  Hyperparameters p{{"n_estimators", std::int64_t{1}}, {"bootstrap", std::int64_t{0}}, {"max_features", std::string("all")}};
  const auto rf = TrainedModel::fit({EstimatorKind::RfReg, p, 9}, x, y);
  const auto dt = TrainedModel::fit({EstimatorKind::DtReg, {{"max_features", std::string("all")}}, 9}, x, y);
  const Matrix q = random_matrix(20, 4, 6);
  CHECK(rf.predict(q) == dt.predict(q));

  const auto flat = TrainedModel::fit({EstimatorKind::RfReg, {{"max_depth", std::int64_t{1}}, {"n_estimators", std::int64_t{7}}}, 1},
                                      x, Vector::Constant(50, 2.5));
  CHECK(flat.predict(q) == Vector::Constant(20, 2.5));
}

TEST_CASE("forest is independent of thread count") {
  const Matrix x = random_matrix(80, 4, 7);
  const Vector y = threshold_labels(x, 0.5);
  const EstimatorSpec spec(EstimatorKind::RfClf, {{"n_estimators", std::int64_t{25}}}, 123);
  const auto one = TrainedModel::fit(spec, x, y, 1);
  const auto three = TrainedModel::fit(spec, x, y, 3);
  CHECK(model_to_string(one) == model_to_string(three));
  const Vector p = one.predict_proba(random_matrix(30, 4, 8));
  CHECK(p.minCoeff() >= 0.0);
  CHECK(p.maxCoeff() <= 1.0);
}

TEST_CASE("vote ties resolve to class 0") {
  // two stumps voting in opposite directions
  std::vector<DecisionTree> trees;
  trees.emplace_back(std::vector<TreeNode>{{0, 0.5, 1, 2, 0.5}, {-1, 0, -1, -1, 0.0}, {-1, 0, -1, -1, 1.0}});
  trees.emplace_back(std::vector<TreeNode>{{0, 0.5, 1, 2, 0.5}, {-1, 0, -1, -1, 1.0}, {-1, 0, -1, -1, 0.0}});
  const ForestModel forest(trees, true);
  const Vector p = forest.predict(testutil::rows_of({{0.2}, {0.9}}));
  CHECK(p(0) == 0.5);
  CHECK(p(1) == 0.5);
  // the same vote through a fitted model: two trees, each on one class
  const Matrix x = testutil::rows_of({{0.0}, {1.0}});
  const auto m = TrainedModel::fit({EstimatorKind::RfClf, {{"n_estimators", std::int64_t{2}}, {"bootstrap", std::int64_t{0}},
                                                           {"max_depth", std::int64_t{1}}}, 0},
                                   x, testutil::vec({0, 1}));
  CHECK(m.predict(testutil::rows_of({{0.5}}))(0) == 0.0);
}

TEST_CASE("gradient boosting hand trace") {
  const Matrix x = testutil::rows_of({{0}, {1}});
  const Vector y = testutil::vec({0, 1});
  const Hyperparameters stump{{"n_estimators", std::int64_t{1}}, {"learning_rate", 1.0}, {"max_depth", std::int64_t{1}}};
  const auto m = TrainedModel::fit({EstimatorKind::Gbr, stump}, x, y);
  CHECK(m.predict(x) == y);

  const Matrix r = random_matrix(30, 3, 10);
  const Vector ry = r.col(0) * 5;
  const auto frozen = TrainedModel::fit({EstimatorKind::Gbr, {{"learning_rate", 0.0}}}, r, ry);
  double mean = 0;
  for (int i = 0; i < 30; ++i) mean += ry(i);
  mean /= 30;
  CHECK(frozen.predict(random_matrix(10, 3, 11)) == Vector::Constant(10, mean));
}

TEST_CASE("gradient boosting classifier") {
  const Matrix x = random_matrix(60, 2, 12);
  const Vector y = threshold_labels(x, 0.4);
  const auto m = TrainedModel::fit({EstimatorKind::Gbc, {{"subsample", 0.7}}, 4}, x, y);
  CHECK((m.predict(x) - y).cwiseAbs().sum() <= 2.0);
  const Vector p = m.predict_proba(random_matrix(40, 2, 13));
  CHECK(p.minCoeff() >= 0.0);
  CHECK(p.maxCoeff() <= 1.0);

  const auto ones = TrainedModel::fit({EstimatorKind::Gbc}, x, Vector::Ones(60));
  const Vector q = ones.predict_proba(x);
  CHECK(q.minCoeff() == q.maxCoeff());
  CHECK(q(0) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(q(0) < 1.0);
}

TEST_CASE("adaboost") {
  const Matrix x = random_matrix(40, 1, 14);
  const Vector y = threshold_labels(x, 0.37);
  const auto clf = TrainedModel::fit({EstimatorKind::AdaClf, {{"n_estimators", std::int64_t{10}}}}, x, y);
  CHECK(clf.predict(x) == y);
  CHECK_THROWS_AS(TrainedModel::fit({EstimatorKind::AdaClf, {{"learning_rate", 0.0}}}, x, y), SpecError);
  CHECK_THROWS_AS(TrainedModel::fit({EstimatorKind::AdaReg, {{"learning_rate", 0.0}}}, x, y), SpecError);

  const Matrix rx = random_matrix(50, 2, 15);
  const Vector ry = rx.col(0).array().square().matrix() + rx.col(1);
  const auto one = TrainedModel::fit({EstimatorKind::AdaReg, {{"n_estimators", std::int64_t{1}}}, 3}, rx, ry);
  const Json params = one.estimator().parameters();
  REQUIRE(params.at("learners").size() == 1);
  const DecisionTree base = DecisionTree::from_json(params["learners"][0]);
  const Matrix q = random_matrix(15, 2, 16);
  CHECK(one.predict(q) == base.predict(q));
  CHECK(base.depth() <= 3);

  CHECK(weighted_median({{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}}) == 2.0);
}

}
