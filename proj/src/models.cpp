#include "cladbench/models.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cladbench/error.hpp"
#include "cladbench/estimators/adaboost.hpp"
#include "cladbench/estimators/boosting.hpp"
#include "cladbench/estimators/forest.hpp"
#include "cladbench/estimators/gnb.hpp"
#include "cladbench/estimators/gpr.hpp"
#include "cladbench/estimators/knn.hpp"
#include "cladbench/estimators/linear.hpp"
#include "cladbench/estimators/logistic.hpp"
#include "cladbench/estimators/mlp.hpp"
#include "cladbench/estimators/tree.hpp"

namespace clad {

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) throw NumericalError("cannot serialize a non-finite value");
    out.push_back(v(i));
  }
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a numeric array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!std::isfinite(m(r, c))) throw NumericalError("cannot serialize a non-finite value");
      data.push_back(m(r, c));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const Json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw ParseError("matrix: data length does not match rows x cols");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows * cols; ++i) m(i / cols, i % cols) = data[static_cast<std::size_t>(i)].get<double>();
  return m;
}

ModelComplexity complexity_of(EstimatorKind kind) {
  const std::string k_trees = "number of trees (estimators)";
  const std::string n = "number of training samples";
  switch (kind) {
    case EstimatorKind::Gbr:
    case EstimatorKind::Gbc:
    case EstimatorKind::RfReg:
    case EstimatorKind::RfClf: return {"O(knLog(n))", {{"k", k_trees}, {"n", n}}};
    case EstimatorKind::Poly: return {"O(n^3)", {{"n", n}}};
    case EstimatorKind::MlpReg:
    case EstimatorKind::MlpClf:
      return {"O(mA^2B^2n^2f)",
              {{"m", "number of training iterations"},
               {"A", "width of hidden layer 1"},
               {"B", "width of hidden layer 2"},
               {"n", n},
               {"f", "number of features"}}};
    case EstimatorKind::KnnReg:
    case EstimatorKind::KnnClf:
      return {"O(knd)", {{"k", "number of neighbors"}, {"n", n}, {"d", "feature dimension"}}};
    case EstimatorKind::LogReg: return {"O(nd)", {{"n", n}, {"d", "feature dimension"}}};
    default: return {"unspecified", {}};
  }
}

Json hyperparameters_to_json(const Hyperparameters& params) {
  Json out = Json::object();
  for (const auto& [name, value] : params) {
    std::visit([&](const auto& v) { out[name] = v; }, value);
  }
  return out;
}

Hyperparameters hyperparameters_from_json(const Json& j) {
  Hyperparameters out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_number_integer()) {
      out[it.key()] = v.get<std::int64_t>();
    } else if (v.is_number_float()) {
      out[it.key()] = v.get<double>();
    } else if (v.is_string()) {
      out[it.key()] = v.get<std::string>();
    } else {
      throw ParseError("hyperparameter '" + it.key() + "' has an unsupported type");
    }
  }
  return out;
}

namespace {

std::unique_ptr<Estimator> fit_estimator(const EstimatorSpec& spec, const Matrix& x, const Vector& y,
                                         FitNotes& notes, unsigned threads) {
  switch (spec.kind) {
    case EstimatorKind::Ols:
    case EstimatorKind::Poly:
    case EstimatorKind::Ridge:
    case EstimatorKind::Lasso: return fit_linear_estimator(spec, x, y, notes);
    case EstimatorKind::KnnReg:
    case EstimatorKind::KnnClf: return fit_knn_estimator(spec, x, y, notes);
    case EstimatorKind::DtReg:
    case EstimatorKind::DtClf: return fit_tree_estimator(spec, x, y, notes);
    case EstimatorKind::RfReg:
    case EstimatorKind::RfClf: return fit_forest_estimator(spec, x, y, notes, threads);
    case EstimatorKind::Gbr:
    case EstimatorKind::Gbc: return fit_boosting_estimator(spec, x, y, notes);
    case EstimatorKind::AdaReg:
    case EstimatorKind::AdaClf: return fit_adaboost_estimator(spec, x, y, notes);
    case EstimatorKind::MlpReg:
    case EstimatorKind::MlpClf: return fit_mlp_estimator(spec, x, y, notes);
    case EstimatorKind::LogReg: return fit_logistic_estimator(spec, x, y, notes);
    case EstimatorKind::Gnb: return fit_gnb_estimator(spec, x, y, notes);
    case EstimatorKind::Gpr: return fit_gpr_estimator(spec, x, y, notes);
  }
  throw InternalError("unhandled estimator kind");
}

std::unique_ptr<Estimator> estimator_from_json(EstimatorKind kind, const Json& j) {
  const bool classify = task_of(kind) == Task::Classification;
  switch (kind) {
    case EstimatorKind::Ols:
    case EstimatorKind::Poly:
    case EstimatorKind::Ridge:
    case EstimatorKind::Lasso: return LinearModel::from_json(j);
    case EstimatorKind::KnnReg:
    case EstimatorKind::KnnClf: return KnnModel::from_json(j, classify);
    case EstimatorKind::DtReg:
    case EstimatorKind::DtClf: return std::make_unique<TreeModel>(DecisionTree::from_json(j.at("tree")));
    case EstimatorKind::RfReg:
    case EstimatorKind::RfClf: return ForestModel::from_json(j, classify);
    case EstimatorKind::Gbr:
    case EstimatorKind::Gbc: return BoostingModel::from_json(j, classify);
    case EstimatorKind::AdaReg:
    case EstimatorKind::AdaClf: return AdaBoostModel::from_json(j, classify);
    case EstimatorKind::MlpReg:
    case EstimatorKind::MlpClf: return MlpModel::from_json(j);
    case EstimatorKind::LogReg: return LogisticModel::from_json(j);
    case EstimatorKind::Gnb: return GaussianNbModel::from_json(j);
    case EstimatorKind::Gpr: return GprModel::from_json(j);
  }
  throw InternalError("unhandled estimator kind");
}

void check_training_data(Task task, const Matrix& x, const Vector& y) {
  if (x.rows() == 0) throw ShapeError("fit: training matrix has no rows");
  if (x.cols() == 0) throw ShapeError("fit: training matrix has no columns");
  if (x.rows() != y.size()) {
    throw ShapeError("fit: " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
                     " targets");
  }
  if (!x.allFinite()) throw ValidationError("fit: training matrix contains non-finite values");
  if (!y.allFinite()) throw ValidationError("fit: targets contain non-finite values");
  if (task == Task::Classification) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) != 0.0 && y(i) != 1.0) throw ValidationError("fit: classification targets must be 0 or 1");
    }
  }
}

}  // namespace

TrainedModel TrainedModel::fit(const EstimatorSpec& spec, const Matrix& x, const Vector& y,
                               unsigned threads) {
  TrainedModel m;
  m.spec_ = resolve_spec(spec);
  m.task_ = task_of(m.spec_.kind);
  check_training_data(m.task_, x, y);
  const auto start = std::chrono::steady_clock::now();
  m.estimator_ = fit_estimator(m.spec_, x, y, m.meta_.notes, threads);
  m.meta_.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.meta_.n_train = static_cast<std::size_t>(x.rows());
  m.meta_.n_features = static_cast<std::size_t>(x.cols());
  m.complexity_ = complexity_of(m.spec_.kind);
  return m;
}

TrainedModel TrainedModel::fit_pipeline(const EstimatorSpec& spec, const Matrix& raw_x,
                                        const Vector& y, std::optional<FeatureSet> featureset,
                                        std::optional<Target> target, unsigned threads) {
  if (raw_x.rows() == 0) throw ShapeError("fit: training matrix has no rows");
  if (featureset && feature_count(*featureset) != static_cast<std::size_t>(raw_x.cols())) {
    throw ShapeError("fit: column count does not match the feature set");
  }
  if (target && is_classification_target(*target) != (task_of(spec.kind) == Task::Classification)) {
    throw TaskError("fit: target '" + std::string(target_name(*target)) + "' does not suit " +
                    std::string(kind_name(spec.kind)));
  }
  NormalizationParams norm = fit_normalizer(raw_x);
  TrainedModel m = fit(spec, normalize(norm, raw_x), y, threads);
  m.normalizer_ = std::move(norm);
  m.meta_.featureset = featureset;
  m.meta_.target = target;
  return m;
}

Vector TrainedModel::raw(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != meta_.n_features) {
    throw ShapeError("predict: expected " + std::to_string(meta_.n_features) + " features, got " +
                     std::to_string(x.cols()));
  }
  if (x.rows() == 0) return Vector(0);
  return normalizer_ ? estimator_->predict(normalize(*normalizer_, x)) : estimator_->predict(x);
}

Vector TrainedModel::predict(const Matrix& x) const {
  Vector out = raw(x);
  if (task_ == Task::Classification) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = out(i) > 0.5 ? 1.0 : 0.0;
  }
  return out;
}

Vector TrainedModel::predict_proba(const Matrix& x) const {
  if (task_ != Task::Classification) {
    throw TaskError("predict_proba: " + std::string(kind_name(spec_.kind)) + " is a regressor");
  }
  return raw(x).cwiseMax(0.0).cwiseMin(1.0);
}

Json TrainedModel::to_json(const Json& provenance) const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = std::string(kind_name(spec_.kind));
  j["task"] = std::string(task_name(task_));
  j["seed"] = spec_.seed;
  j["hyperparameters"] = hyperparameters_to_json(spec_.params);
  j["featureset"] = meta_.featureset ? Json(std::string(featureset_name(*meta_.featureset))) : Json(nullptr);
  j["target"] = meta_.target ? Json(std::string(target_name(*meta_.target))) : Json(nullptr);
  j["normalizer"] = normalizer_ ? Json{{"min", vector_to_json(normalizer_->min)},
                                       {"max", vector_to_json(normalizer_->max)}}
                                : Json(nullptr);
  j["fit_meta"] = Json{{"n_train", meta_.n_train}, {"n_features", meta_.n_features}, {"notes", meta_.notes}};
  j["complexity"] = Json{{"expression", complexity_.expression}, {"symbols", complexity_.symbols}};
  j["parameters"] = estimator_->parameters();
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

TrainedModel TrainedModel::from_json(const Json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw IntegrityError("model artifact schema_version " + std::to_string(version) +
                           " is not supported");
    }
    TrainedModel m;
    m.spec_.kind = parse_kind(j.at("kind").get<std::string>());
    m.spec_.seed = j.at("seed").get<std::uint64_t>();
    m.spec_.params = hyperparameters_from_json(j.at("hyperparameters"));
    m.spec_ = resolve_spec(m.spec_);
    m.task_ = task_of(m.spec_.kind);
    if (j.at("task").get<std::string>() != task_name(m.task_)) {
      throw IntegrityError("model artifact task does not match its kind");
    }
    if (!j.at("featureset").is_null()) m.meta_.featureset = parse_featureset(j["featureset"].get<std::string>());
    if (!j.at("target").is_null()) m.meta_.target = parse_target(j["target"].get<std::string>());
    if (!j.at("normalizer").is_null()) {
      NormalizationParams norm{vector_from_json(j["normalizer"].at("min")),
                               vector_from_json(j["normalizer"].at("max"))};
      m.normalizer_ = std::move(norm);
    }
    const Json& meta = j.at("fit_meta");
    m.meta_.n_train = meta.at("n_train").get<std::size_t>();
    m.meta_.n_features = meta.at("n_features").get<std::size_t>();
    m.meta_.notes = meta.at("notes").get<FitNotes>();
    if (m.normalizer_ && m.normalizer_->dims() != m.meta_.n_features) {
      throw IntegrityError("model artifact normalizer width does not match n_features");
    }
    m.complexity_ = complexity_of(m.spec_.kind);
    m.estimator_ = estimator_from_json(m.spec_.kind, j.at("parameters"));
    return m;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("model artifact: ") + e.what());
  }
}

std::string model_to_string(const TrainedModel& model, const Json& provenance) {
  return model.to_json(provenance).dump(1) + "\n";
}

TrainedModel model_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("model artifact is not valid JSON: ") + e.what());
  }
  return TrainedModel::from_json(j);
}

void save_model(const TrainedModel& model, const std::string& path, const Json& provenance) {
  const std::string text = model_to_string(model, provenance);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_string(buffer.str());
}

}  // namespace clad
