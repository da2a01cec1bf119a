#include <cmath>

#include "cladbench/error.hpp"
#include "cladbench/estimators/gnb.hpp"
#include "cladbench/estimators/gpr.hpp"
#include "cladbench/estimators/knn.hpp"
#include "cladbench/estimators/linear.hpp"
#include "cladbench/estimators/logistic.hpp"
#include "cladbench/estimators/mlp.hpp"
#include "cladbench/models.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clad;
using testutil::random_matrix;

namespace {

Vector labels_from(const Matrix& x) {
  Vector y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) y(i) = x(i, 0) + 0.5 * x(i, 1) > 0.75 ? 1.0 : 0.0;
  return y;
}

double max_rel_error(const Vector& a, const Vector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a(i)), std::abs(b(i)), 1e-7});
    worst = std::max(worst, std::abs(a(i) - b(i)) / denom);
  }
  return worst;
}

}  // namespace

TEST_SUITE("models.knn") {

TEST_CASE("k=1 and k=n") {
  const Matrix x = random_matrix(30, 3, 21);
  Rng rng(22);
  Vector y(30);
  for (int i = 0; i < 30; ++i) y(i) = rng.normal();
  CHECK(TrainedModel::fit({EstimatorKind::KnnReg, {{"n_neighbors", std::int64_t{1}}}}, x, y).predict(x) == y);
  const auto all = TrainedModel::fit({EstimatorKind::KnnReg, {{"n_neighbors", std::int64_t{30}}}}, x, y);
  const Vector p = all.predict(random_matrix(5, 3, 23));
  CHECK((p.array() - y.mean()).abs().maxCoeff() <= 1e-12);
  // k above n is clamped
  const auto big = TrainedModel::fit({EstimatorKind::KnnReg, {{"n_neighbors", std::int64_t{100}}}}, x, y);
  CHECK(big.meta().notes.at("n_neighbors_effective") == "30");
}

TEST_CASE("classifier vote tie goes to class 0") {
  const Matrix x = testutil::rows_of({{0.0}, {2.0}, {10.0}});
  const auto m = TrainedModel::fit({EstimatorKind::KnnClf, {{"n_neighbors", std::int64_t{2}}}}, x, testutil::vec({0, 1, 1}));
  const Matrix q = testutil::rows_of({{1.0}});
  CHECK(m.predict_proba(q)(0) == 0.5);
  CHECK(m.predict(q)(0) == 0.0);
}

TEST_CASE("distance weighting and metrics") {
  const Matrix x = testutil::rows_of({{0.0, 0.0}, {3.0, 4.0}});
  const KnnModel e(x, testutil::vec({0, 1}), 2, KnnMetric::Euclidean, 2, KnnWeights::Distance, false);
  const KnnModel m(x, testutil::vec({0, 1}), 2, KnnMetric::Manhattan, 2, KnnWeights::Uniform, false);
  CHECK(e.distance(x.row(0).data(), x.row(1).data()) == 5.0);
  CHECK(m.distance(x.row(0).data(), x.row(1).data()) == 7.0);
  // weights 1/1 and 1/4 at (0.6, 0.8)
  const Vector p = e.predict(testutil::rows_of({{0.6, 0.8}, {3.0, 4.0}}));
  CHECK(p(0) == doctest::Approx(0.25 / 1.25).epsilon(1e-14));
  CHECK(p(1) == 1.0);
}

}

TEST_SUITE("models.mlp") {

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(31);
  const Activation acts[] = {Activation::Tanh, Activation::Logistic, Activation::Relu, Activation::Identity};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto inputs = static_cast<std::size_t>(1 + rng.uniform_int(0, 3));
    std::vector<std::size_t> hidden;
    const auto layers = rng.uniform_int(0, 3);
    for (std::int64_t l = 0; l < layers; ++l) hidden.push_back(static_cast<std::size_t>(1 + rng.uniform_int(0, 15)));
    const bool classify = trial % 2 == 1;
    MlpNetwork net = MlpNetwork::initialize(inputs, hidden, acts[trial % 4], classify, rng);
    const Matrix x = random_matrix(12, static_cast<Eigen::Index>(inputs), 100 + trial, -1, 1);
    Vector y(12);
    for (int i = 0; i < 12; ++i) y(i) = classify ? (rng.uniform() < 0.5 ? 0.0 : 1.0) : rng.normal();
    const double alpha = 0.01 * trial;

    Vector analytic;
    net.loss(x, y, alpha, &analytic);
    const Vector base = net.flatten();
    Vector numeric(base.size());
    const double h = 1e-6;
    for (Eigen::Index k = 0; k < base.size(); ++k) {
      Vector p = base;
      p(k) += h;
      net.assign(p);
      const double up = net.loss(x, y, alpha, nullptr);
      p(k) -= 2 * h;
      net.assign(p);
      const double down = net.loss(x, y, alpha, nullptr);
      numeric(k) = (up - down) / (2 * h);
    }
    net.assign(base);
    worst = std::max(worst, max_rel_error(analytic, numeric));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("no hidden layer converges to least squares") {
  const Matrix x = random_matrix(50, 2, 41);
  Vector y = 2 * x.col(0) - x.col(1);
  y.array() += 0.3;
  const auto mlp = TrainedModel::fit({EstimatorKind::MlpReg,
                                      {{"hidden_layer_sizes", std::string("")}, {"alpha", 0.0},
                                       {"activation", std::string("identity")}, {"learning_rate_init", 0.003},
                                       {"max_iter", std::int64_t{20000}}, {"n_iter_no_change", std::int64_t{500}}},
                                      5},
                                     x, y);
  const Vector p = mlp.predict(x);
  CHECK((p - y).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("hidden layer parsing") {
  CHECK(parse_hidden_layers("(128, 64)") == std::vector<std::size_t>{128, 64});
  CHECK(parse_hidden_layers("").empty());
  CHECK_THROWS_AS(parse_hidden_layers("12,x"), SpecError);
}

TEST_CASE("classifier learns a separable rule") {
  const Matrix x = random_matrix(80, 2, 43);
  const Vector y = labels_from(x);
  const auto m = TrainedModel::fit({EstimatorKind::MlpClf, {{"hidden_layer_sizes", std::string("8")},
                                                           {"learning_rate_init", 0.01}}, 2},
                                   x, y);
  CHECK((m.predict(x) - y).cwiseAbs().sum() <= 4.0);
}

}

TEST_SUITE("models.misc") {

TEST_CASE("logistic regression boundary") {
  const LogisticModel lm(testutil::vec({2.0, -1.0}), 0.5);
  const Vector p = lm.predict(testutil::rows_of({{0.0, 0.5}, {1.0, 2.5}, {0.0, 100.0}}));
  CHECK(p(0) == 0.5);
  CHECK(p(1) == 0.5);
  CHECK(p(2) < 1e-20);

  const Matrix x = testutil::rows_of({{-2}, {-1}, {1}, {2}});
  const auto fit = TrainedModel::fit({EstimatorKind::LogReg}, x, testutil::vec({0, 0, 1, 1}));
  CHECK(fit.predict_proba(testutil::rows_of({{0.0}}))(0) == doctest::Approx(0.5).epsilon(1e-6));
  const auto l1 = TrainedModel::fit({EstimatorKind::LogReg, {{"penalty", std::string("l1")}, {"C", 1e-4}}}, x,
                                    testutil::vec({0, 0, 1, 1}));
  CHECK(dynamic_cast<const LogisticModel&>(l1.estimator()).weights().isZero(0));
}

TEST_CASE("gaussian naive bayes midpoint") {
  const GaussianNbModel nb({testutil::vec({0.0}), testutil::vec({2.0})}, {testutil::vec({1.0}), testutil::vec({1.0})},
                           {0.5, 0.5});
  CHECK(nb.predict(testutil::rows_of({{1.0}}))(0) == doctest::Approx(0.5).epsilon(1e-14));
  const auto fit = TrainedModel::fit({EstimatorKind::Gnb}, testutil::rows_of({{-1}, {1}, {1}, {3}}),
                                     testutil::vec({0, 0, 1, 1}));
  CHECK(fit.predict_proba(testutil::rows_of({{1.0}}))(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.predict_proba(testutil::rows_of({{3.0}}))(0) > 0.5);
}

TEST_CASE("gpr interpolates") {
  const Matrix x = random_matrix(25, 2, 51);
  Vector y(25);
  for (int i = 0; i < 25; ++i) y(i) = std::sin(3 * x(i, 0)) + x(i, 1);
  const auto m = TrainedModel::fit({EstimatorKind::Gpr, {{"kernel", std::string("1**2 * RBF(length_scale=0.5)")},
                                                        {"alpha", 1e-10}}},
                                   x, y);
  CHECK((m.predict(x) - y).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("gpr two point system") {
  const double alpha = 1e-10;
  const GprModel g(Kernel::constant(1.0) * Kernel::rbf(1.0), testutil::rows_of({{0.0}, {1.0}}),
                   testutil::vec({1.0, 3.0}), alpha);
  const double a = 1.0 + alpha;
  const double e = std::exp(-0.5);
  const double k0 = std::exp(-2.0);
  const double k1 = std::exp(-0.5);
  // K^-1 = [[a, -e], [-e, a]] / (a^2 - e^2), centered targets (-1, 1)
  const double det = a * a - e * e;
  const double w0 = (a * -1.0 - e * 1.0) / det;
  const double w1 = (-e * -1.0 + a * 1.0) / det;
  const double mean = 2.0 + k0 * w0 + k1 * w1;
  const double quad = (a * k0 * k0 - 2 * e * k0 * k1 + a * k1 * k1) / det;
  const auto post = g.posterior(testutil::rows_of({{2.0}}));
  CHECK(std::abs(post.mean(0) - mean) <= 1e-10);
  CHECK(std::abs(post.variance(0) - (1.0 - quad)) <= 1e-10);
}

TEST_CASE("kernel strings") {
  CHECK(Kernel::parse("1**2 * RBF(length_scale=1) + WhiteKernel(noise_level=1)").to_string() ==
        "ConstantKernel(constant_value=1) * RBF(length_scale=1) + WhiteKernel(noise_level=1)");
  CHECK(Kernel::parse("Matern(length_scale=2, nu=2.5)").to_string() == "Matern(length_scale=2, nu=2.5)");
  CHECK_THROWS_AS(Kernel::parse("ExpSineSquared()"), SpecError);
  CHECK_THROWS_AS(Kernel::parse("RBF(width=1)"), SpecError);
}

TEST_CASE("complexity annotations") {
  CHECK(complexity_of(EstimatorKind::Gbr).expression == "O(knLog(n))");
  CHECK(complexity_of(EstimatorKind::RfClf).expression == "O(knLog(n))");
  CHECK(complexity_of(EstimatorKind::Poly).expression == "O(n^3)");
  CHECK(complexity_of(EstimatorKind::MlpClf).expression == "O(mA^2B^2n^2f)");
  CHECK(complexity_of(EstimatorKind::KnnReg).expression == "O(knd)");
  CHECK(complexity_of(EstimatorKind::LogReg).expression == "O(nd)");
  CHECK(complexity_of(EstimatorKind::Gnb).expression == "unspecified");
}

TEST_CASE("every kind round-trips through its artifact") {
  const Matrix x = random_matrix(40, 2, 61);
  const Vector yr = x.col(0).array().square().matrix() + x.col(1);
  const Vector yc = labels_from(x);
  const Matrix q = random_matrix(15, 2, 62);
  for (EstimatorKind kind : all_kinds()) {
    CAPTURE(std::string(kind_name(kind)));
    Hyperparameters p;
    if (kind == EstimatorKind::MlpReg || kind == EstimatorKind::MlpClf) {
      p = {{"hidden_layer_sizes", std::string("6")}, {"max_iter", std::int64_t{200}}};
    } else if (kind == EstimatorKind::RfReg || kind == EstimatorKind::RfClf) {
      p = {{"n_estimators", std::int64_t{8}}};
    }
    const bool classify = task_of(kind) == Task::Classification;
    const auto m = TrainedModel::fit({kind, p, 17}, x, classify ? yc : yr);
    const std::string text = model_to_string(m);
    const auto back = model_from_string(text);
    CHECK(model_to_string(back) == text);
    CHECK(back.predict(q) == m.predict(q));
    if (classify) {
      CHECK(back.predict_proba(q) == m.predict_proba(q));
    } else {
      CHECK_THROWS_AS(m.predict_proba(q), TaskError);
    }
    CHECK_THROWS_AS(m.predict(random_matrix(2, 3, 1)), ShapeError);
  }
}

TEST_CASE("artifact integrity") {
  const auto m = TrainedModel::fit({EstimatorKind::Ols}, random_matrix(5, 1, 1), testutil::vec({1, 2, 3, 4, 5}));
  Json j = Json::parse(model_to_string(m));
  j["schema_version"] = 99;
  CHECK_THROWS_AS(model_from_string(j.dump()), IntegrityError);
  CHECK_THROWS_AS(model_from_string("{not json"), ParseError);
  CHECK_THROWS_AS(TrainedModel::fit({EstimatorKind::LogReg}, random_matrix(3, 1, 1), testutil::vec({0, 2, 1})),
                  ValidationError);
}

}
