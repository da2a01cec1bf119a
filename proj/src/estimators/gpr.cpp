#include "cladbench/estimators/gpr.hpp"

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"

namespace clad {

GprModel::GprModel(Kernel kernel, Matrix x_train, Vector y_train, double alpha)
    : kernel_(std::move(kernel)), x_(std::move(x_train)), y_(std::move(y_train)), alpha_(alpha) {
  const Eigen::Index n = x_.rows();
  if (n == 0) throw ShapeError("gpr: empty training set");
  y_mean_ = y_.mean();
  Eigen::MatrixXd k = kernel_.cross(x_, x_, true);
  k.diagonal().array() += alpha_;
  chol_.compute(k);
  if (chol_.info() != Eigen::Success) {
    jitter_ = 1e-10 * k.trace() / static_cast<double>(n);
    k.diagonal().array() += jitter_;
    chol_.compute(k);
    if (chol_.info() != Eigen::Success) {
      throw NumericalError("gpr: kernel matrix is not positive definite, even with jitter");
    }
  }
  weights_ = chol_.solve((y_.array() - y_mean_).matrix());
}

Vector GprModel::predict(const Matrix& x) const {
  if (x.cols() != x_.cols()) throw ShapeError("gpr: feature arity mismatch");
  Vector mean = kernel_.cross(x, x_, false) * weights_;
  mean.array() += y_mean_;
  return mean;
}

GprPosterior GprModel::posterior(const Matrix& x) const {
  if (x.cols() != x_.cols()) throw ShapeError("gpr: feature arity mismatch");
  const Eigen::MatrixXd ks = kernel_.cross(x, x_, false);
  GprPosterior out;
  out.mean = ks * weights_;
  out.mean.array() += y_mean_;
  const Eigen::MatrixXd v = chol_.matrixL().solve(ks.transpose());
  out.variance = kernel_.diag(x) - v.colwise().squaredNorm().transpose();
  out.variance = out.variance.cwiseMax(0.0);
  return out;
}

Json GprModel::parameters() const {
  return Json{{"kernel", kernel_.to_string()},
              {"alpha", alpha_},
              {"x_train", matrix_to_json(x_)},
              {"y_train", vector_to_json(y_)}};
}

std::unique_ptr<GprModel> GprModel::from_json(const Json& j) {
  return std::make_unique<GprModel>(Kernel::parse(j.at("kernel").get<std::string>()),
                                    matrix_from_json(j.at("x_train")),
                                    vector_from_json(j.at("y_train")), j.at("alpha").get<double>());
}

std::unique_ptr<Estimator> fit_gpr_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes) {
  auto model = std::make_unique<GprModel>(Kernel::parse(spec.text("kernel")), x, y, spec.real("alpha"));
  if (model->jitter() > 0.0) notes["gpr_jitter"] = format_sig(model->jitter(), 6);
  return model;
}

}  // namespace clad
