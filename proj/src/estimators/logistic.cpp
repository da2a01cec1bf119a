#include "cladbench/estimators/logistic.hpp"

#include <cmath>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"

namespace clad {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct Objective {
  const Matrix& x;
  const Vector& y;
  double strength;  // 1 / (C n)
  bool l1;

  // Smooth part: mean log-loss (+ l2 term). Gradient over (w, b), b last.
  double smooth(const Vector& theta, Vector* grad) const {
    const Eigen::Index d = x.cols();
    const auto n = static_cast<double>(x.rows());
    const Vector z = (x * theta.head(d)).array() + theta(d);
    double loss = 0.0;
    Vector resid(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      loss += softplus(z(i)) - y(i) * z(i);
      resid(i) = logistic(z(i)) - y(i);
    }
    loss /= n;
    if (!l1) loss += 0.5 * strength * theta.head(d).squaredNorm();
    if (grad) {
      grad->resize(d + 1);
      grad->head(d) = x.transpose() * resid / n;
      if (!l1) grad->head(d) += strength * theta.head(d);
      (*grad)(d) = resid.sum() / n;
    }
    return loss;
  }

  double nonsmooth(const Vector& theta) const {
    return l1 ? strength * theta.head(x.cols()).cwiseAbs().sum() : 0.0;
  }

  // Soft-thresholding of the weights (not the intercept) for step size t.
  Vector prox(const Vector& theta, double t) const {
    if (!l1) return theta;
    Vector out = theta;
    const double k = t * strength;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out(j) = std::copysign(std::max(std::abs(theta(j)) - k, 0.0), theta(j));
    }
    return out;
  }
};

}  // namespace

LogisticFit solve_logistic(const Matrix& x, const Vector& y, double c, bool l1, double tol,
                           int max_iter) {
  const Eigen::Index d = x.cols();
  const Objective obj{x, y, 1.0 / (c * static_cast<double>(x.rows())), l1};
  Vector theta = Vector::Zero(d + 1);
  Vector grad;
  double step = 1.0;
  LogisticFit fit;
  double f = obj.smooth(theta, &grad);
  for (int it = 1; it <= max_iter; ++it) {
    // Backtracking on the (proximal) gradient step with a sufficient-decrease test.
    Vector next;
    double f_next = 0.0;
    step = std::min(step * 2.0, 1e6);
    while (true) {
      next = obj.prox(theta - step * grad, step);
      f_next = obj.smooth(next, nullptr);
      const Vector diff = next - theta;
      if (f_next <= f + grad.dot(diff) + diff.squaredNorm() / (2.0 * step) || step < 1e-20) break;
      step *= 0.5;
    }
    const Vector mapping = (theta - next) / step;
    theta = std::move(next);
    f = obj.smooth(theta, &grad);
    fit.iterations = it;
    fit.optimality = l1 ? mapping.norm() : grad.norm();
    if (fit.optimality < tol) break;
  }
  fit.weights = theta.head(d);
  fit.intercept = theta(d);
  return fit;
}

Vector LogisticModel::predict(const Matrix& x) const {
  if (x.cols() != weights_.size()) throw ShapeError("logistic: feature arity mismatch");
  Vector z = (x * weights_).array() + intercept_;
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = logistic(z(i));
  return z;
}

Json LogisticModel::parameters() const {
  return Json{{"weights", vector_to_json(weights_)}, {"intercept", intercept_}};
}

std::unique_ptr<LogisticModel> LogisticModel::from_json(const Json& j) {
  return std::make_unique<LogisticModel>(vector_from_json(j.at("weights")),
                                         j.at("intercept").get<double>());
}

std::unique_ptr<Estimator> fit_logistic_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                  const Vector& y, FitNotes& notes) {
  auto fit = solve_logistic(x, y, spec.real("C"), spec.text("penalty") == "l1", spec.real("tol"),
                            static_cast<int>(spec.integer("max_iter")));
  notes["iterations"] = std::to_string(fit.iterations);
  notes["optimality"] = format_sig(fit.optimality, 6);
  return std::make_unique<LogisticModel>(std::move(fit.weights), fit.intercept);
}

}  // namespace clad
