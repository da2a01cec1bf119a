#pragma once

#include <memory>
#include <vector>

#include "cladbench/estimator.hpp"

namespace clad {

struct LinearCoefficients {
  Vector weights;
  double intercept = 0.0;
};

// Exponent tuples of every monomial of total degree 1..degree, graded then
// lexicographic (x0, x1, ..., x0^2, x0 x1, ...).
std::vector<std::vector<int>> polynomial_terms(std::size_t dims, int degree);
Matrix expand_polynomial(const Matrix& x, const std::vector<std::vector<int>>& terms);

class LinearModel final : public Estimator {
 public:
  LinearModel(LinearCoefficients coef, std::vector<std::vector<int>> terms)
      : coef_(std::move(coef)), terms_(std::move(terms)) {}

  Vector predict(const Matrix& x) const override;
  Json parameters() const override;
  static std::unique_ptr<LinearModel> from_json(const Json& j);

  const LinearCoefficients& coefficients() const { return coef_; }

 private:
  LinearCoefficients coef_;
  std::vector<std::vector<int>> terms_;  // empty for plain linear models
};

// Least squares with an unpenalized intercept and ridge penalty alpha*|w|^2.
LinearCoefficients solve_ridge(const Matrix& x, const Vector& y, double alpha);

struct LassoResult {
  LinearCoefficients coef;
  double duality_gap = 0.0;
  int sweeps = 0;
};

// Minimizes (1/2n)|y - Xw - b|^2 + alpha*|w|_1 by cyclic coordinate descent.
LassoResult solve_lasso(const Matrix& x, const Vector& y, double alpha, double tol, int max_sweeps);

std::unique_ptr<Estimator> fit_linear_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                const Vector& y, FitNotes& notes);

}  // namespace clad
