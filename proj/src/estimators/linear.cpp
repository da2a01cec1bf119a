#include "cladbench/estimators/linear.hpp"

#include <cmath>
#include <functional>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"

namespace clad {

std::vector<std::vector<int>> polynomial_terms(std::size_t dims, int degree) {
  std::vector<std::vector<int>> terms;
  std::vector<std::size_t> picks;
  std::function<void(std::size_t, int)> grow = [&](std::size_t first, int remaining) {
    if (remaining == 0) {
      std::vector<int> exps(dims, 0);
      for (auto p : picks) ++exps[p];
      terms.push_back(std::move(exps));
      return;
    }
    for (std::size_t v = first; v < dims; ++v) {
      picks.push_back(v);
      grow(v, remaining - 1);
      picks.pop_back();
    }
  };
  for (int d = 1; d <= degree; ++d) grow(0, d);
  return terms;
}

Matrix expand_polynomial(const Matrix& x, const std::vector<std::vector<int>>& terms) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(terms.size()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (std::size_t t = 0; t < terms.size(); ++t) {
      double v = 1.0;
      for (std::size_t c = 0; c < terms[t].size(); ++c) {
        for (int e = 0; e < terms[t][c]; ++e) v *= x(r, static_cast<Eigen::Index>(c));
      }
      out(r, static_cast<Eigen::Index>(t)) = v;
    }
  }
  return out;
}

Vector LinearModel::predict(const Matrix& x) const {
  const Matrix design = terms_.empty() ? x : expand_polynomial(x, terms_);
  if (design.cols() != coef_.weights.size()) {
    throw ShapeError("linear model: expected " + std::to_string(coef_.weights.size()) +
                     " design columns, got " + std::to_string(design.cols()));
  }
  Vector out = design * coef_.weights;
  out.array() += coef_.intercept;
  return out;
}

Json LinearModel::parameters() const {
  return Json{{"weights", vector_to_json(coef_.weights)},
              {"intercept", coef_.intercept},
              {"terms", terms_}};
}

std::unique_ptr<LinearModel> LinearModel::from_json(const Json& j) {
  LinearCoefficients c;
  c.weights = vector_from_json(j.at("weights"));
  c.intercept = j.at("intercept").get<double>();
  return std::make_unique<LinearModel>(std::move(c),
                                       j.at("terms").get<std::vector<std::vector<int>>>());
}

namespace {

struct Centered {
  Matrix x;
  Vector y;
  Eigen::RowVectorXd x_mean;
  double y_mean = 0.0;
};

Centered center(const Matrix& x, const Vector& y) {
  Centered c;
  c.x_mean = x.colwise().mean();
  c.y_mean = y.mean();
  c.x = x.rowwise() - c.x_mean;
  c.y = y.array() - c.y_mean;
  return c;
}

}  // namespace

LinearCoefficients solve_ridge(const Matrix& x, const Vector& y, double alpha) {
  const Centered c = center(x, y);
  const Eigen::Index d = x.cols();
  // Orthogonal factorization of the stacked system [X; sqrt(alpha) I] gives
  // the normal-equation solution without squaring the condition number.
  Eigen::MatrixXd stacked(x.rows() + (alpha > 0.0 ? d : 0), d);
  stacked.topRows(x.rows()) = c.x;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(stacked.rows());
  rhs.head(x.rows()) = c.y;
  if (alpha > 0.0) {
    stacked.bottomRows(d) = std::sqrt(alpha) * Eigen::MatrixXd::Identity(d, d);
  }
  LinearCoefficients coef;
  coef.weights = stacked.completeOrthogonalDecomposition().solve(rhs);
  coef.intercept = c.y_mean - (c.x_mean * coef.weights)(0);
  return coef;
}

LassoResult solve_lasso(const Matrix& x, const Vector& y, double alpha, double tol, int max_sweeps) {
  const Centered c = center(x, y);
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const double penalty = alpha * static_cast<double>(n);

  LassoResult result;
  Vector w = Vector::Zero(d);
  Vector residual = c.y;
  const Vector col_sq = c.x.colwise().squaredNorm().transpose();
  const double y_sq = c.y.squaredNorm();

  auto duality_gap = [&]() {
    const Vector corr = c.x.transpose() * residual;
    const double corr_max = corr.cwiseAbs().maxCoeff();
    const double scale = corr_max > penalty && corr_max > 0.0 ? penalty / corr_max : 1.0;
    const double primal = 0.5 * residual.squaredNorm() + penalty * w.cwiseAbs().sum();
    const double dual = 0.5 * y_sq - 0.5 * (c.y - scale * residual).squaredNorm();
    return primal - dual;
  };

  if (y_sq == 0.0 || d == 0) {
    result.coef.weights = w;
    result.coef.intercept = c.y_mean;
    return result;
  }

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (col_sq(j) == 0.0) continue;
      const double old = w(j);
      const double rho = c.x.col(j).dot(residual) + col_sq(j) * old;
      const double shrunk = std::copysign(std::max(std::abs(rho) - penalty, 0.0), rho);
      const double updated = shrunk / col_sq(j);
      if (updated != old) {
        residual -= (updated - old) * c.x.col(j);
        w(j) = updated;
      }
    }
    result.sweeps = sweep;
    result.duality_gap = duality_gap();
    if (result.duality_gap <= tol * y_sq) break;
  }
  result.coef.weights = w;
  result.coef.intercept = c.y_mean - (c.x_mean * w)(0);
  return result;
}

std::unique_ptr<Estimator> fit_linear_estimator(const EstimatorSpec& spec, const Matrix& x,
                                                const Vector& y, FitNotes& notes) {
  switch (spec.kind) {
    case EstimatorKind::Ols:
      return std::make_unique<LinearModel>(solve_ridge(x, y, 0.0), std::vector<std::vector<int>>{});
    case EstimatorKind::Ridge:
      return std::make_unique<LinearModel>(solve_ridge(x, y, spec.real("alpha")),
                                           std::vector<std::vector<int>>{});
    case EstimatorKind::Lasso: {
      auto res = solve_lasso(x, y, spec.real("alpha"), spec.real("tol"),
                             static_cast<int>(spec.integer("max_iter")));
      notes["lasso_sweeps"] = std::to_string(res.sweeps);
      notes["lasso_duality_gap"] = format_sig(res.duality_gap, 6);
      return std::make_unique<LinearModel>(std::move(res.coef), std::vector<std::vector<int>>{});
    }
    case EstimatorKind::Poly: {
      auto terms = polynomial_terms(static_cast<std::size_t>(x.cols()),
                                    static_cast<int>(spec.integer("degree")));
      auto coef = solve_ridge(expand_polynomial(x, terms), y, 0.0);
      return std::make_unique<LinearModel>(std::move(coef), std::move(terms));
    }
    default: throw SpecError("fit_linear: not a linear kind");
  }
}

}  // namespace clad
