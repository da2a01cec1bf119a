#include "cladbench/estimators/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cladbench/error.hpp"

namespace clad {

namespace {

KnnMetric parse_metric(const std::string& name) {
  if (name == "euclidean") return KnnMetric::Euclidean;
  if (name == "manhattan") return KnnMetric::Manhattan;
  return KnnMetric::Minkowski;
}

std::string metric_name(KnnMetric m) {
  switch (m) {
    case KnnMetric::Euclidean: return "euclidean";
    case KnnMetric::Manhattan: return "manhattan";
    case KnnMetric::Minkowski: return "minkowski";
  }
  return "minkowski";
}

}  // namespace

KnnModel::KnnModel(Matrix x, Vector y, std::size_t k, KnnMetric metric, double p,
                   KnnWeights weights, bool classify)
    : x_(std::move(x)), y_(std::move(y)), k_(k), metric_(metric), p_(p), weights_(weights),
      classify_(classify) {}

double KnnModel::distance(const double* a, const double* b) const {
  const auto d = static_cast<std::size_t>(x_.cols());
  double acc = 0.0;
  switch (metric_) {
    case KnnMetric::Manhattan:
      for (std::size_t i = 0; i < d; ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    case KnnMetric::Euclidean:
      for (std::size_t i = 0; i < d; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(acc);
    case KnnMetric::Minkowski:
      if (p_ == 2.0) {
        for (std::size_t i = 0; i < d; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(acc);
      }
      if (p_ == 1.0) {
        for (std::size_t i = 0; i < d; ++i) acc += std::abs(a[i] - b[i]);
        return acc;
      }
      for (std::size_t i = 0; i < d; ++i) acc += std::pow(std::abs(a[i] - b[i]), p_);
      return std::pow(acc, 1.0 / p_);
  }
  return acc;
}

Vector KnnModel::predict(const Matrix& x) const {
  if (x.cols() != x_.cols()) throw ShapeError("knn: feature arity mismatch");
  const auto n = static_cast<std::size_t>(x_.rows());
  const std::size_t k = std::min(k_, n);
  Vector out(x.rows());
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (Eigen::Index q = 0; q < x.rows(); ++q) {
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = {distance(x.row(q).data(), x_.row(static_cast<Eigen::Index>(i)).data()), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    double weight_sum = 0.0;
    double value_sum = 0.0;
    const bool exact = weights_ == KnnWeights::Distance && dist[0].first == 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double w = 1.0;
      if (weights_ == KnnWeights::Distance) {
        if (exact) {
          w = dist[j].first == 0.0 ? 1.0 : 0.0;
        } else {
          w = 1.0 / dist[j].first;
        }
      }
      weight_sum += w;
      value_sum += w * y_(static_cast<Eigen::Index>(dist[j].second));
    }
    // For classifiers y is 0/1, so this is the weighted class-1 fraction.
    out(q) = value_sum / weight_sum;
  }
  return out;
}

Json KnnModel::parameters() const {
  return Json{{"x", matrix_to_json(x_)},
              {"y", vector_to_json(y_)},
              {"k", k_},
              {"metric", metric_name(metric_)},
              {"p", p_},
              {"weights", weights_ == KnnWeights::Distance ? "distance" : "uniform"}};
}

std::unique_ptr<KnnModel> KnnModel::from_json(const Json& j, bool classify) {
  return std::make_unique<KnnModel>(
      matrix_from_json(j.at("x")), vector_from_json(j.at("y")), j.at("k").get<std::size_t>(),
      parse_metric(j.at("metric").get<std::string>()), j.at("p").get<double>(),
      j.at("weights").get<std::string>() == "distance" ? KnnWeights::Distance : KnnWeights::Uniform,
      classify);
}

std::unique_ptr<Estimator> fit_knn_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes) {
  const auto requested = static_cast<std::size_t>(spec.integer("n_neighbors"));
  const auto n = static_cast<std::size_t>(x.rows());
  const std::size_t k = std::min(requested, n);
  if (k != requested) notes["n_neighbors_effective"] = std::to_string(k);
  notes["search_algorithm"] = "brute";
  const KnnMetric metric = parse_metric(spec.text("metric"));
  // Euclidean and Manhattan are Minkowski with a fixed power.
  double power = spec.real("p");
  if (metric == KnnMetric::Euclidean) power = 2.0;
  if (metric == KnnMetric::Manhattan) power = 1.0;
  return std::make_unique<KnnModel>(
      x, y, k, metric, power,
      spec.text("weights") == "distance" ? KnnWeights::Distance : KnnWeights::Uniform,
      spec.kind == EstimatorKind::KnnClf);
}

}  // namespace clad
