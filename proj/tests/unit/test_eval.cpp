#include <cmath>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"
#include "cladbench/eval.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace clad;

namespace {

std::span<const double> sp(const std::vector<double>& v) { return {v.data(), v.size()}; }

std::vector<double> thresholded(const std::vector<double>& s) {
  std::vector<double> out;
  for (double v : s) out.push_back(v > 0.5 ? 1.0 : 0.0);
  return out;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("hand examples") {
  const std::vector<double> y{1, 2, 3};
  const std::vector<double> p{1, 2, 4};
  CHECK(r2_score(sp(y), sp(p)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mae(sp(y), sp(p)) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(mae(sp(y), sp(std::vector<double>{2, 3, 5})) == doctest::Approx(4.0 / 3).epsilon(1e-15));
  CHECK(mse(sp(y), sp(p)) == doctest::Approx(1.0 / 3).epsilon(1e-15));

  const std::vector<double> lab{0, 0, 1, 1};
  const std::vector<double> score{0.1, 0.4, 0.35, 0.8};
  CHECK(auc(roc_curve(sp(lab), sp(score))) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(accuracy(sp(lab), sp(std::vector<double>{0, 1, 1, 1})) == 0.75);
  const Confusion c = confusion_matrix(sp(lab), sp(std::vector<double>{0, 1, 0, 1}));
  CHECK(c == Confusion{1, 1, 1, 1});
}

TEST_CASE("metric errors") {
  const std::vector<double> a{1, 2};
  const std::vector<double> b{1, 2, 3};
  const std::vector<double> none;
  CHECK_THROWS_AS(r2_score(sp(a), sp(b)), ShapeError);
  CHECK_THROWS_AS(mae(sp(none), sp(none)), EmptyInputError);
  CHECK_THROWS_AS(r2_score(sp(std::vector<double>{2, 2}), sp(a)), UndefinedMetricError);
  CHECK_THROWS_AS(accuracy(sp(std::vector<double>{0, 2}), sp(a)), ValidationError);
  CHECK_THROWS_AS(roc_curve(sp(std::vector<double>{1, 1}), sp(a)), UndefinedMetricError);
}

TEST_CASE("roc endpoints and monotonicity") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto c = oracle::binary_case(rng);
    const auto roc = roc_curve(sp(c.truth), sp(c.values));
    CHECK(roc.front().fpr == 0.0);
    CHECK(roc.front().tpr == 0.0);
    CHECK(std::isinf(roc.front().threshold));
    CHECK(roc.back().fpr == 1.0);
    CHECK(roc.back().tpr == 1.0);
    for (std::size_t i = 1; i < roc.size(); ++i) {
      CHECK(roc[i].fpr >= roc[i - 1].fpr);
      CHECK(roc[i].tpr >= roc[i - 1].tpr);
    }
  }
}

TEST_CASE("brute force agreement") {
  Rng rng(6);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const auto r = oracle::regression_case(rng);
    worst = std::max(worst, std::abs(r2_score(sp(r.truth), sp(r.values)) - oracle::r2(r.truth, r.values)));
    worst = std::max(worst, std::abs(mae(sp(r.truth), sp(r.values)) - oracle::mae(r.truth, r.values)));
    const auto b = oracle::binary_case(rng);
    const auto pred = thresholded(b.values);
    worst = std::max(worst, std::abs(accuracy(sp(b.truth), sp(pred)) - oracle::accuracy(b.truth, pred)));
    worst = std::max(worst, std::abs(auc(roc_curve(sp(b.truth), sp(b.values))) - oracle::pairwise_auc(b.truth, b.values)));
    const auto c = confusion_matrix(sp(b.truth), sp(pred));
    const auto ref = oracle::confusion(b.truth, pred);
    CHECK(c == Confusion{ref[0][0], ref[0][1], ref[1][0], ref[1][1]});
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("fold normalizers never see held-out rows") {
  SurrogateConfig cfg;
  cfg.seed = 3;
  cfg.n_experiment = 20;
  cfg.n_cfd = 30;
  const Dataset ds = synthesize_dataset(cfg);
  const Matrix x = feature_matrix(ds, FeatureSet::Full);
  const Vector y = Eigen::Map<const Vector>(target_values(ds, Target::Depth).data(), 50);
  const SplitIndices folds = k_fold_indices(50, 5, 9);
  const EstimatorSpec spec(EstimatorKind::Ridge, {{"alpha", 0.01}});
  const CvResult base = cross_validate(spec, x, y, folds, Scoring::R2);
  REQUIRE(base.normalizers.size() == 5);
  for (std::size_t f = 0; f < 5; ++f) {
    Matrix moved = x;
    for (auto r : folds.folds[f]) moved.row(static_cast<Eigen::Index>(r)).array() *= 1000.0;
    const CvResult other = cross_validate(spec, moved, y, folds, Scoring::R2);
    CHECK(other.normalizers[f] == base.normalizers[f]);
    for (std::size_t g = 0; g < 5; ++g) {
      if (g != f) CHECK_FALSE(other.normalizers[g] == base.normalizers[g]);
    }
  }
}

TEST_CASE("cv summary and holdout") {
  SurrogateConfig cfg;
  cfg.seed = 4;
  const Dataset ds = synthesize_dataset(cfg);
  const auto cv = cross_validate(EstimatorSpec(EstimatorKind::Ols), ds, FeatureSet::Full, Target::Depth, 5, 1);
  double mean = 0;
  for (double s : cv.scores) mean += s;
  mean /= 5;
  CHECK(cv.mean == doctest::Approx(mean).epsilon(1e-14));
  double var = 0;
  for (double s : cv.scores) var += (s - mean) * (s - mean);
  CHECK(cv.std == doctest::Approx(std::sqrt(var / 5)).epsilon(1e-12));

  const Holdout h = make_holdout(ds, FeatureSet::Full, Target::Width, 0.2, 8);
  CHECK(h.x_test.rows() == 65);
  CHECK(h.x_train.rows() == 260);
  CHECK(h.x_train.cols() == 4);
}

TEST_CASE("report json") {
  const Matrix x = testutil::rows_of({{0}, {1}, {2}, {3}});
  const auto m = TrainedModel::fit({EstimatorKind::LogReg}, x, testutil::vec({0, 0, 1, 1}));
  const auto rep = evaluate_classification(m, x, testutil::vec({0, 0, 1, 1}));
  const Json j = report_to_json(rep, SplitInfo{1, 0.2, std::nullopt});
  CHECK(j.at("task") == "classification");
  CHECK(j.at("roc").at(0).at(2).is_null());
  CHECK(j.at("confusion") == Json::array({Json::array({2, 0}), Json::array({0, 2})}));
  CHECK(j.at("metrics").at("auc_percent") == doctest::Approx(100.0));
}

}
