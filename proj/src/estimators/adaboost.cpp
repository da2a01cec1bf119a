#include "cladbench/estimators/adaboost.hpp"

#include <algorithm>
#include <cmath>

#include "cladbench/error.hpp"

namespace clad {

double weighted_median(std::vector<std::pair<double, double>> value_weight) {
  std::sort(value_weight.begin(), value_weight.end());
  double total = 0.0;
  for (const auto& [v, w] : value_weight) total += w;
  double cum = 0.0;
  for (const auto& [v, w] : value_weight) {
    cum += w;
    if (cum >= 0.5 * total) return v;
  }
  return value_weight.back().first;
}

Vector AdaBoostModel::predict(const Matrix& x) const {
  Vector out(x.rows());
  std::vector<std::pair<double, double>> votes(learners_.size());
  double total = 0.0;
  for (double w : weights_) total += w;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double* row = x.row(r).data();
    if (classify_) {
      double positive = 0.0;
      for (std::size_t t = 0; t < learners_.size(); ++t) {
        if (learners_[t].predict_row(row) > 0.5) positive += weights_[t];
      }
      out(r) = total > 0.0 ? positive / total : 0.0;
    } else {
      for (std::size_t t = 0; t < learners_.size(); ++t) {
        votes[t] = {learners_[t].predict_row(row), weights_[t]};
      }
      out(r) = weighted_median(votes);
    }
  }
  return out;
}

Json AdaBoostModel::parameters() const {
  Json learners = Json::array();
  for (const auto& l : learners_) learners.push_back(l.to_json());
  return Json{{"learners", learners}, {"weights", weights_}};
}

std::unique_ptr<AdaBoostModel> AdaBoostModel::from_json(const Json& j, bool classify) {
  std::vector<DecisionTree> learners;
  for (const auto& l : j.at("learners")) learners.push_back(DecisionTree::from_json(l));
  return std::make_unique<AdaBoostModel>(std::move(learners),
                                         j.at("weights").get<std::vector<double>>(), classify);
}

namespace {

std::unique_ptr<Estimator> fit_samme(const EstimatorSpec& spec, const Matrix& x, const Vector& y,
                                     FitNotes& notes) {
  const auto n = x.rows();
  const auto rounds = static_cast<std::size_t>(spec.integer("n_estimators"));
  const double lr = spec.real("learning_rate");
  TreeParams stump;
  stump.max_depth = 1;
  stump.criterion = SplitCriterion::Gini;

  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<DecisionTree> learners;
  std::vector<double> alphas;
  std::string stop = "n_estimators";
  for (std::size_t t = 0; t < rounds; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    DecisionTree tree = DecisionTree::fit(x, y, w, stump, rng);
    Vector miss(n);
    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double label = tree.predict_row(x.row(i).data()) > 0.5 ? 1.0 : 0.0;
      miss(i) = label != y(i) ? 1.0 : 0.0;
      err += w(i) * miss(i);
    }
    err /= w.sum();
    if (err <= 0.0) {
      learners.push_back(std::move(tree));
      alphas.push_back(1.0);
      stop = "perfect_fit";
      break;
    }
    if (err >= 0.5) {
      // Keep a lone first learner so the ensemble is never empty.
      if (learners.empty()) {
        learners.push_back(std::move(tree));
        alphas.push_back(1.0);
      }
      stop = "weak_learner_error";
      break;
    }
    const double alpha = lr * std::log((1.0 - err) / err);
    learners.push_back(std::move(tree));
    alphas.push_back(alpha);
    for (Eigen::Index i = 0; i < n; ++i) w(i) *= std::exp(alpha * miss(i));
    w /= w.sum();
  }
  notes["stop_reason"] = stop;
  notes["learners"] = std::to_string(learners.size());
  return std::make_unique<AdaBoostModel>(std::move(learners), std::move(alphas), true);
}

std::unique_ptr<Estimator> fit_r2(const EstimatorSpec& spec, const Matrix& x, const Vector& y,
                                  FitNotes& notes) {
  const auto n = x.rows();
  const auto rounds = static_cast<std::size_t>(spec.integer("n_estimators"));
  const double lr = spec.real("learning_rate");
  const std::string& loss = spec.text("loss");
  TreeParams base;
  base.max_depth = 3;

  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<DecisionTree> learners;
  std::vector<double> betas;
  std::vector<double> cdf(static_cast<std::size_t>(n));
  std::string stop = "n_estimators";
  for (std::size_t t = 0; t < rounds; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    // Weighted bootstrap of the training set.
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) cdf[static_cast<std::size_t>(i)] = (acc += w(i));
    Vector counts = Vector::Zero(n);
    for (Eigen::Index draw = 0; draw < n; ++draw) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      auto idx = std::min<std::ptrdiff_t>(it - cdf.begin(), n - 1);
      counts(idx) += 1.0;
    }
    DecisionTree tree = DecisionTree::fit(x, y, counts, base, rng);

    Vector err(n);
    for (Eigen::Index i = 0; i < n; ++i) err(i) = std::abs(tree.predict_row(x.row(i).data()) - y(i));
    const double err_max = err.maxCoeff();
    if (err_max <= 0.0) {
      learners.push_back(std::move(tree));
      betas.push_back(1.0);
      stop = "perfect_fit";
      break;
    }
    Vector l = err / err_max;
    if (loss == "square") {
      l = l.array().square().matrix();
    } else if (loss == "exponential") {
      l = (1.0 - (-l.array()).exp()).matrix();
    }
    const double avg_loss = w.dot(l) / w.sum();
    if (avg_loss >= 0.5) {
      if (learners.empty()) {
        learners.push_back(std::move(tree));
        betas.push_back(1.0);
      }
      stop = "average_loss";
      break;
    }
    if (avg_loss <= 0.0) {
      learners.push_back(std::move(tree));
      betas.push_back(1.0);
      stop = "perfect_fit";
      break;
    }
    const double beta = avg_loss / (1.0 - avg_loss);
    learners.push_back(std::move(tree));
    betas.push_back(lr * std::log(1.0 / beta));
    for (Eigen::Index i = 0; i < n; ++i) w(i) *= std::pow(beta, (1.0 - l(i)) * lr);
    w /= w.sum();
  }
  notes["stop_reason"] = stop;
  notes["learners"] = std::to_string(learners.size());
  return std::make_unique<AdaBoostModel>(std::move(learners), std::move(betas), false);
}

}  // namespace

std::unique_ptr<Estimator> fit_adaboost_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                  const Vector& y, FitNotes& notes) {
  if (spec.kind == EstimatorKind::AdaClf) return fit_samme(spec, x, y, notes);
  return fit_r2(spec, x, y, notes);
}

}  // namespace clad
