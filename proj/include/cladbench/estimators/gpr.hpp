#pragma once

#include <memory>
#include <utility>

#include "cladbench/estimator.hpp"
#include "cladbench/estimators/kernel.hpp"

namespace clad {

struct GprPosterior {
  Vector mean;
  Vector variance;
};

/// Exact GP regression with a fixed kernel; targets are centered on the
/// training mean. The Cholesky factor is rebuilt on load.
class GprModel final : public Estimator {
 public:
  GprModel(Kernel kernel, Matrix x_train, Vector y_train, double alpha);

  Vector predict(const Matrix& x) const override;
  GprPosterior posterior(const Matrix& x) const;
  Json parameters() const override;
  static std::unique_ptr<GprModel> from_json(const Json& j);

  double jitter() const { return jitter_; }

 private:
  Kernel kernel_;
  Matrix x_;
  Vector y_;
  double alpha_;
  double y_mean_ = 0.0;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Vector weights_;
};

std::unique_ptr<Estimator> fit_gpr_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes);

}  // namespace clad
