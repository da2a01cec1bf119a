#include "cladbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cladbench/error.hpp"
#include "cladbench/parallel.hpp"

namespace clad {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(what) + ": lengths differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw EmptyInputError(std::string(what) + ": empty input");
}

void check_labels(std::span<const double> labels, const char* what) {
  for (double v : labels) {
    if (v != 0.0 && v != 1.0) throw ValidationError(std::string(what) + ": labels must be 0 or 1");
  }
}

}  // namespace

double r2_score(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "r2_score");
  const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / static_cast<double>(actual.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  if (ss_tot == 0.0) throw UndefinedMetricError("r2_score: actual values are constant");
  return 1.0 - ss_res / ss_tot;
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "mae");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += std::abs(actual[i] - predicted[i]);
  return s / static_cast<double>(actual.size());
}

double mse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
  return s / static_cast<double>(actual.size());
}

double accuracy(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "accuracy");
  check_labels(actual, "accuracy");
  check_labels(predicted, "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) hits += actual[i] == predicted[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(actual.size());
}

std::vector<RocPoint> roc_curve(std::span<const double> actual, std::span<const double> scores) {
  check_pair(actual, scores, "roc_curve");
  check_labels(actual, "roc_curve");
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("roc_curve: scores must be finite");
  }
  const auto positives = static_cast<std::size_t>(std::count(actual.begin(), actual.end(), 1.0));
  const std::size_t negatives = actual.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("roc_curve: both classes must be present");
  }
  std::vector<std::size_t> order(actual.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> roc{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (actual[order[i]] == 1.0 ? tp : fp) += 1;
    }
    roc.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                   static_cast<double>(tp) / static_cast<double>(positives), threshold});
  }
  return roc;
}

double auc(const std::vector<RocPoint>& roc) {
  if (roc.size() < 2) throw UndefinedMetricError("auc: curve needs at least two points");
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) * 0.5;
  }
  return area;
}

Confusion confusion_matrix(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "confusion_matrix");
  check_labels(actual, "confusion_matrix");
  check_labels(predicted, "confusion_matrix");
  Confusion c;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      (predicted[i] == 0.0 ? c.tn : c.fp) += 1;
    } else {
      (predicted[i] == 0.0 ? c.fn : c.tp) += 1;
    }
  }
  return c;
}

RegressionReport evaluate_regression(const TrainedModel& model, const Matrix& x, const Vector& y) {
  if (model.task() != Task::Regression) throw TaskError("evaluate_regression: model is a classifier");
  const Vector pred = model.predict(x);
  RegressionReport r;
  r.kind = model.kind();
  r.featureset = model.meta().featureset;
  r.target = model.meta().target;
  r.r2 = r2_score(as_span(y), as_span(pred));
  r.mae = mae(as_span(y), as_span(pred));
  for (Eigen::Index i = 0; i < y.size(); ++i) r.parity.emplace_back(y(i), pred(i));
  return r;
}

ClassificationReport evaluate_classification(const TrainedModel& model, const Matrix& x,
                                             const Vector& y) {
  if (model.task() != Task::Classification) {
    throw TaskError("evaluate_classification: model is a regressor");
  }
  const Vector proba = model.predict_proba(x);
  const Vector labels = model.predict(x);
  ClassificationReport r;
  r.kind = model.kind();
  r.featureset = model.meta().featureset;
  r.accuracy = accuracy(as_span(y), as_span(labels));
  r.confusion = confusion_matrix(as_span(y), as_span(labels));
  r.roc = roc_curve(as_span(y), as_span(proba));
  r.auc = auc(r.roc);
  return r;
}

namespace {

Json report_header(Task task, EstimatorKind kind, const std::optional<FeatureSet>& fs,
                   const SplitInfo& split) {
  Json j;
  j["schema_version"] = 1;
  j["task"] = std::string(task_name(task));
  j["model_kind"] = std::string(kind_name(kind));
  j["featureset"] = fs ? Json(std::string(featureset_name(*fs))) : Json(nullptr);
  Json s{{"seed", split.seed}};
  if (split.ratio) s["ratio"] = *split.ratio;
  if (split.k) s["k"] = *split.k;
  j["split"] = s;
  return j;
}

}  // namespace

Json report_to_json(const RegressionReport& report, const SplitInfo& split) {
  Json j = report_header(Task::Regression, report.kind, report.featureset, split);
  j["target"] = report.target ? Json(std::string(target_name(*report.target))) : Json(nullptr);
  j["metrics"] = Json{{"r2", report.r2}, {"mae", report.mae}};
  Json parity = Json::array();
  for (const auto& [a, p] : report.parity) parity.push_back({a, p});
  j["parity"] = std::move(parity);
  return j;
}

Json report_to_json(const ClassificationReport& report, const SplitInfo& split) {
  Json j = report_header(Task::Classification, report.kind, report.featureset, split);
  j["target"] = "quality";
  j["metrics"] =
      Json{{"accuracy", report.accuracy}, {"auc", report.auc}, {"auc_percent", report.auc * 100.0}};
  Json roc = Json::array();
  // The +inf sentinel threshold is written as null.
  for (const auto& p : report.roc) {
    roc.push_back({p.fpr, p.tpr, std::isinf(p.threshold) ? Json(nullptr) : Json(p.threshold)});
  }
  j["roc"] = std::move(roc);
  const auto& c = report.confusion;
  j["confusion"] = Json::array({Json::array({c.tn, c.fp}), Json::array({c.fn, c.tp})});
  return j;
}

Matrix select_rows(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Vector select_rows(const Vector& y, std::span<const std::size_t> rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Holdout make_holdout(const Dataset& dataset, FeatureSet featureset, Target target,
                     double test_fraction, std::uint64_t seed) {
  Holdout h;
  h.split = train_test_split(dataset, test_fraction, seed);
  const Matrix x = feature_matrix(dataset, featureset);
  const auto values = target_values(dataset, target);
  const Vector y = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  h.x_train = select_rows(x, h.split.train);
  h.y_train = select_rows(y, h.split.train);
  h.x_test = select_rows(x, h.split.test);
  h.y_test = select_rows(y, h.split.test);
  return h;
}

CvResult cross_validate(const EstimatorSpec& spec, const Matrix& raw_x, const Vector& y,
                        const SplitIndices& folds, Scoring scoring, unsigned threads) {
  if (raw_x.rows() != y.size()) throw ShapeError("cross_validate: rows and targets differ in length");
  const std::size_t k = folds.folds.size();
  if (k < 2) throw SplitError("cross_validate: need at least 2 folds");
  CvResult result;
  result.k = k;
  result.scores.assign(k, 0.0);
  result.normalizers.resize(k);
  parallel_for(k, threads, [&](std::size_t f) {
    const auto train_rows = fold_training_indices(folds, f);
    const auto& test_rows = folds.folds[f];
    TrainedModel model = TrainedModel::fit_pipeline(spec, select_rows(raw_x, train_rows),
                                                    select_rows(y, train_rows));
    const Vector y_test = select_rows(y, test_rows);
    const Vector pred = model.predict(select_rows(raw_x, test_rows));
    switch (scoring) {
      case Scoring::R2: result.scores[f] = r2_score(as_span(y_test), as_span(pred)); break;
      case Scoring::Mse: result.scores[f] = mse(as_span(y_test), as_span(pred)); break;
      case Scoring::Accuracy: result.scores[f] = accuracy(as_span(y_test), as_span(pred)); break;
    }
    result.normalizers[f] = *model.normalizer();
  });
  double sum = 0.0;
  for (double s : result.scores) sum += s;
  result.mean = sum / static_cast<double>(k);
  double var = 0.0;
  for (double s : result.scores) var += (s - result.mean) * (s - result.mean);
  result.std = std::sqrt(var / static_cast<double>(k));
  return result;
}

CvResult cross_validate(const EstimatorSpec& spec, const Dataset& dataset, FeatureSet featureset,
                        Target target, std::size_t k, std::uint64_t seed, unsigned threads) {
  if (is_classification_target(target) != (task_of(spec.kind) == Task::Classification)) {
    throw TaskError("cross_validate: target does not match the estimator task");
  }
  const Matrix x = feature_matrix(dataset, featureset);
  const auto values = target_values(dataset, target);
  const Vector y = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  const SplitIndices folds = k_fold_indices(dataset.size(), k, seed);
  return cross_validate(spec, x, y, folds, is_classification_target(target) ? Scoring::Accuracy : Scoring::R2,
                        threads);
}

}  // namespace clad
