#include "cladbench/estimators/gnb.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cladbench/error.hpp"

namespace clad {

Vector GaussianNbModel::predict(const Matrix& x) const {
  if (x.cols() != means_[0].size()) throw ShapeError("gnb: feature arity mismatch");
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    std::array<double, 2> log_post{};
    for (int c = 0; c < 2; ++c) {
      if (priors_[c] <= 0.0) {
        log_post[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double lp = std::log(priors_[c]);
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double var = variances_[c](j);
        const double diff = x(r, j) - means_[c](j);
        lp -= 0.5 * std::log(2.0 * std::numbers::pi * var) + diff * diff / (2.0 * var);
      }
      log_post[c] = lp;
    }
    if (std::isinf(log_post[1]) && log_post[1] < 0.0) {
      out(r) = 0.0;
    } else if (std::isinf(log_post[0]) && log_post[0] < 0.0) {
      out(r) = 1.0;
    } else {
      // p1 = 1 / (1 + exp(lp0 - lp1))
      const double delta = log_post[0] - log_post[1];
      out(r) = delta >= 0.0 ? std::exp(-delta) / (1.0 + std::exp(-delta)) : 1.0 / (1.0 + std::exp(delta));
    }
  }
  return out;
}

Json GaussianNbModel::parameters() const {
  return Json{{"means", {vector_to_json(means_[0]), vector_to_json(means_[1])}},
              {"variances", {vector_to_json(variances_[0]), vector_to_json(variances_[1])}},
              {"priors", {priors_[0], priors_[1]}}};
}

std::unique_ptr<GaussianNbModel> GaussianNbModel::from_json(const Json& j) {
  return std::make_unique<GaussianNbModel>(
      std::array<Vector, 2>{vector_from_json(j.at("means").at(0)), vector_from_json(j.at("means").at(1))},
      std::array<Vector, 2>{vector_from_json(j.at("variances").at(0)),
                            vector_from_json(j.at("variances").at(1))},
      std::array<double, 2>{j.at("priors").at(0).get<double>(), j.at("priors").at(1).get<double>()});
}

std::unique_ptr<Estimator> fit_gnb_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes) {
  const Eigen::Index d = x.cols();
  const auto n = static_cast<double>(x.rows());
  // Smoothing is relative to the largest per-feature variance of the whole set.
  const Eigen::RowVectorXd overall_mean = x.colwise().mean();
  const double max_var = ((x.rowwise() - overall_mean).array().square().colwise().sum() / n).maxCoeff();
  const double epsilon = spec.real("var_smoothing") * max_var;

  std::array<Vector, 2> means{Vector::Zero(d), Vector::Zero(d)};
  std::array<Vector, 2> vars{Vector::Zero(d), Vector::Zero(d)};
  std::array<double, 2> counts{0.0, 0.0};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y(i) > 0.5 ? 1 : 0;
    counts[c] += 1.0;
    means[c] += x.row(i).transpose();
  }
  for (int c = 0; c < 2; ++c) {
    if (counts[c] > 0.0) means[c] /= counts[c];
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y(i) > 0.5 ? 1 : 0;
    vars[c] += (x.row(i).transpose() - means[c]).array().square().matrix();
  }
  for (int c = 0; c < 2; ++c) {
    if (counts[c] > 0.0) vars[c] /= counts[c];
    vars[c] = (vars[c].array() + epsilon).cwiseMax(std::numeric_limits<double>::min()).matrix();
  }
  notes["epsilon"] = std::to_string(epsilon);
  return std::make_unique<GaussianNbModel>(means, vars,
                                           std::array<double, 2>{counts[0] / n, counts[1] / n});
}

}  // namespace clad
