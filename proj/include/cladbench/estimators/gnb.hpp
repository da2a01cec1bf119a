#pragma once

#include <array>
#include <memory>

#include "cladbench/estimator.hpp"

namespace clad {

/// Binary Gaussian naive Bayes; posteriors evaluated in log space.
class GaussianNbModel final : public Estimator {
 public:
  GaussianNbModel(std::array<Vector, 2> means, std::array<Vector, 2> variances,
                  std::array<double, 2> priors)
      : means_(std::move(means)), variances_(std::move(variances)), priors_(priors) {}

  Vector predict(const Matrix& x) const override;
  Json parameters() const override;
  static std::unique_ptr<GaussianNbModel> from_json(const Json& j);

 private:
  std::array<Vector, 2> means_;
  std::array<Vector, 2> variances_;
  std::array<double, 2> priors_;
};

std::unique_ptr<Estimator> fit_gnb_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes);

}  // namespace clad
