#pragma once

#include <memory>

#include "cladbench/estimator.hpp"

namespace clad {

class LogisticModel final : public Estimator {
 public:
  LogisticModel(Vector weights, double intercept)
      : weights_(std::move(weights)), intercept_(intercept) {}

  Vector predict(const Matrix& x) const override;
  Json parameters() const override;
  static std::unique_ptr<LogisticModel> from_json(const Json& j);

  const Vector& weights() const { return weights_; }
  double intercept() const { return intercept_; }

 private:
  Vector weights_;
  double intercept_;
};

struct LogisticFit {
  Vector weights;
  double intercept = 0.0;
  int iterations = 0;
  double optimality = 0.0;  // gradient (or gradient-mapping) norm at exit
};

/// Minimizes mean log-loss + penalty(w) / (C n), with penalty |w|^2 / 2
/// (l2) or |w|_1 (l1, proximal steps). The intercept is unpenalized.
LogisticFit solve_logistic(const Matrix& x, const Vector& y, double c, bool l1, double tol,
                           int max_iter);

std::unique_ptr<Estimator> fit_logistic_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                  const Vector& y, FitNotes& notes);

}  // namespace clad
