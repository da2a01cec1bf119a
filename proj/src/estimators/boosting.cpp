#include "cladbench/estimators/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cladbench/error.hpp"

namespace clad {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Vector BoostingModel::raw_score(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double* row = x.row(r).data();
    double f = initial_;
    for (const auto& stage : stages_) f += learning_rate_ * stage.predict_row(row);
    out(r) = f;
  }
  return out;
}

Vector BoostingModel::predict(const Matrix& x) const {
  Vector f = raw_score(x);
  if (classify_) {
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = logistic(f(i));
  }
  return f;
}

Json BoostingModel::parameters() const {
  Json stages = Json::array();
  for (const auto& s : stages_) stages.push_back(s.to_json());
  return Json{{"initial", initial_}, {"learning_rate", learning_rate_}, {"stages", stages}};
}

std::unique_ptr<BoostingModel> BoostingModel::from_json(const Json& j, bool classify) {
  std::vector<DecisionTree> stages;
  for (const auto& s : j.at("stages")) stages.push_back(DecisionTree::from_json(s));
  return std::make_unique<BoostingModel>(j.at("initial").get<double>(),
                                         j.at("learning_rate").get<double>(), std::move(stages),
                                         classify);
}

std::unique_ptr<Estimator> fit_boosting_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                  const Vector& y, FitNotes& notes) {
  const bool classify = spec.kind == EstimatorKind::Gbc;
  const TreeParams params = tree_params_from(spec, false);
  const auto n_stages = static_cast<std::size_t>(spec.integer("n_estimators"));
  const double lr = spec.real("learning_rate");
  const double subsample = spec.real("subsample");
  const Eigen::Index n = x.rows();

  double mean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mean += y(i);
  mean /= static_cast<double>(n);

  double initial = mean;
  if (classify) {
    const double p = std::clamp(mean, kProbabilityClamp, 1.0 - kProbabilityClamp);
    initial = std::log(p / (1.0 - p));
    if (mean <= 0.0 || mean >= 1.0) {
      // Single-class data: nothing to boost, the clamped prior is the model.
      notes["single_class"] = "true";
      return std::make_unique<BoostingModel>(initial, lr, std::vector<DecisionTree>{}, true);
    }
  }

  const auto sample_size = static_cast<std::size_t>(
      std::max<double>(1.0, std::floor(subsample * static_cast<double>(n) + 0.5)));
  std::vector<DecisionTree> stages;
  stages.reserve(n_stages);
  Vector score = Vector::Constant(n, initial);
  Vector residual(n);
  std::vector<std::size_t> perm(static_cast<std::size_t>(n));

  for (std::size_t t = 0; t < n_stages; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    Vector weights = Vector::Ones(n);
    if (sample_size < static_cast<std::size_t>(n)) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      rng.shuffle(std::span<std::size_t>(perm));
      weights.setZero();
      for (std::size_t i = 0; i < sample_size; ++i) weights(static_cast<Eigen::Index>(perm[i])) = 1.0;
    }

    Vector prob;
    if (classify) {
      prob.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        prob(i) = logistic(score(i));
        residual(i) = y(i) - prob(i);
      }
    } else {
      residual = y - score;
    }

    DecisionTree tree = DecisionTree::fit(x, residual, weights, params, rng);
    if (classify) {
      // Newton step per leaf: sum(residual) / sum(p (1 - p)) over in-bag rows.
      auto& nodes = tree.nodes();
      std::vector<double> num(nodes.size(), 0.0);
      std::vector<double> den(nodes.size(), 0.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (weights(i) == 0.0) continue;
        const int leaf = tree.leaf_of(x.row(i).data());
        num[leaf] += residual(i);
        den[leaf] += prob(i) * (1.0 - prob(i));
      }
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (nodes[k].feature >= 0) continue;
        nodes[k].value = den[k] > 1e-150 ? num[k] / den[k] : 0.0;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) score(i) += lr * tree.predict_row(x.row(i).data());
    stages.push_back(std::move(tree));
  }
  notes["stages"] = std::to_string(stages.size());
  return std::make_unique<BoostingModel>(initial, lr, std::move(stages), classify);
}

}  // namespace clad
