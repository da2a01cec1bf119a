#pragma once

#include <memory>
#include <string>

#include "cladbench/estimator.hpp"

namespace clad {

enum class KnnMetric { Minkowski, Euclidean, Manhattan };
enum class KnnWeights { Uniform, Distance };

/// Brute-force nearest neighbours. Distance ties resolve to the lower
/// training index; an exact match (distance 0) takes all the weight.
class KnnModel final : public Estimator {
 public:
  KnnModel(Matrix x, Vector y, std::size_t k, KnnMetric metric, double p, KnnWeights weights,
           bool classify);

  Vector predict(const Matrix& x) const override;
  Json parameters() const override;
  static std::unique_ptr<KnnModel> from_json(const Json& j, bool classify);

  double distance(const double* a, const double* b) const;

 private:
  Matrix x_;
  Vector y_;
  std::size_t k_;
  KnnMetric metric_;
  double p_;
  KnnWeights weights_;
  bool classify_;
};

std::unique_ptr<Estimator> fit_knn_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes);

}  // namespace clad
