#include <algorithm>
#include <array>
#include <cmath>

#include "cladbench/error.hpp"
#include "cladbench/estimator_spec.hpp"
#include "cladbench/data.hpp"

namespace clad {

namespace {

struct KindInfo {
  EstimatorKind kind;
  std::string_view name;
  Task task;
  bool stochastic;
};

constexpr std::array<KindInfo, 19> kKinds{{
    {EstimatorKind::Ols, "ols", Task::Regression, false},
    {EstimatorKind::Poly, "poly", Task::Regression, false},
    {EstimatorKind::Ridge, "ridge", Task::Regression, false},
    {EstimatorKind::Lasso, "lasso", Task::Regression, false},
    {EstimatorKind::KnnReg, "knn_reg", Task::Regression, false},
    {EstimatorKind::KnnClf, "knn_clf", Task::Classification, false},
    {EstimatorKind::DtReg, "dt_reg", Task::Regression, true},
    {EstimatorKind::DtClf, "dt_clf", Task::Classification, true},
    {EstimatorKind::RfReg, "rf_reg", Task::Regression, true},
    {EstimatorKind::RfClf, "rf_clf", Task::Classification, true},
    {EstimatorKind::Gbr, "gbr", Task::Regression, true},
    {EstimatorKind::Gbc, "gbc", Task::Classification, true},
    {EstimatorKind::AdaReg, "ada_reg", Task::Regression, true},
    {EstimatorKind::AdaClf, "ada_clf", Task::Classification, true},
    {EstimatorKind::MlpReg, "mlp_reg", Task::Regression, true},
    {EstimatorKind::MlpClf, "mlp_clf", Task::Classification, true},
    {EstimatorKind::LogReg, "logreg", Task::Classification, false},
    {EstimatorKind::Gnb, "gnb", Task::Classification, false},
    {EstimatorKind::Gpr, "gpr", Task::Regression, false},
}};

const KindInfo& info(EstimatorKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw SpecError("unknown estimator kind");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

ParamSchema real(std::string name, double fallback, double lo, double hi, bool lo_open = false,
                 bool hi_open = false) {
  ParamSchema s;
  s.name = std::move(name);
  s.type = ParamType::Real;
  s.fallback = fallback;
  s.lo = lo;
  s.hi = hi;
  s.lo_open = lo_open;
  s.hi_open = hi_open;
  return s;
}

ParamSchema integer(std::string name, std::int64_t fallback, double lo, double hi = kInf) {
  ParamSchema s;
  s.name = std::move(name);
  s.type = ParamType::Integer;
  s.fallback = fallback;
  s.lo = lo;
  s.hi = hi;
  return s;
}

ParamSchema categorical(std::string name, std::string fallback, std::vector<std::string> choices) {
  ParamSchema s;
  s.name = std::move(name);
  s.type = ParamType::Categorical;
  s.fallback = std::move(fallback);
  s.choices = std::move(choices);
  return s;
}

ParamSchema text(std::string name, std::string fallback) {
  ParamSchema s;
  s.name = std::move(name);
  s.type = ParamType::Text;
  s.fallback = std::move(fallback);
  return s;
}

std::vector<ParamSchema> tree_schema(Task task, std::int64_t depth, std::string max_features) {
  auto depth_param = integer("max_depth", depth, 1);
  depth_param.minus_one_unlimited = true;
  std::vector<ParamSchema> out{
      depth_param,
      integer("min_samples_split", 2, 2),
      integer("min_samples_leaf", 1, 1),
      categorical("max_features", std::move(max_features), {"all", "auto", "sqrt", "log2"}),
  };
  if (task == Task::Classification) {
    out.push_back(categorical("criterion", "gini", {"gini", "entropy", "log_loss"}));
  } else {
    out.push_back(categorical("criterion", "squared_error", {"squared_error"}));
  }
  return out;
}

std::vector<ParamSchema> knn_schema() {
  return {
      integer("n_neighbors", 5, 1),
      categorical("weights", "uniform", {"uniform", "distance"}),
      categorical("metric", "minkowski", {"minkowski", "euclidean", "manhattan"}),
      real("p", 2.0, 1.0, kInf),
      integer("leaf_size", 30, 1),
      categorical("algorithm", "auto", {"auto", "ball_tree", "kd_tree", "brute"}),
  };
}

std::vector<ParamSchema> mlp_schema() {
  return {
      text("hidden_layer_sizes", "100"),
      categorical("activation", "relu", {"identity", "logistic", "tanh", "relu"}),
      categorical("solver", "adam", {"sgd", "adam", "lbfgs"}),
      real("alpha", 1e-4, 0.0, kInf),
      real("learning_rate_init", 1e-3, 0.0, kInf, true),
      categorical("learning_rate", "constant", {"constant"}),
      real("momentum", 0.9, 0.0, 1.0, false, true),
      integer("max_iter", 5000, 1),
      real("tol", 1e-8, 0.0, kInf),
      integer("n_iter_no_change", 20, 1),
  };
}

std::vector<ParamSchema> build_schema(EstimatorKind kind) {
  const Task task = task_of(kind);
  switch (kind) {
    case EstimatorKind::Ols: return {};
    case EstimatorKind::Poly: return {integer("degree", 2, 1, 10)};
    case EstimatorKind::Ridge: return {real("alpha", 1.0, 0.0, kInf)};
    case EstimatorKind::Lasso:
      return {real("alpha", 1.0, 0.0, kInf), integer("max_iter", 10000, 1),
              real("tol", 1e-6, 0.0, kInf, true)};
    case EstimatorKind::KnnReg:
    case EstimatorKind::KnnClf: return knn_schema();
    case EstimatorKind::DtReg:
    case EstimatorKind::DtClf: return tree_schema(task, -1, "all");
    case EstimatorKind::RfReg:
    case EstimatorKind::RfClf: {
      auto s = tree_schema(task, -1, "auto");
      s.push_back(integer("n_estimators", 100, 1));
      s.push_back(integer("bootstrap", 1, 0, 1));
      return s;
    }
    case EstimatorKind::Gbr:
    case EstimatorKind::Gbc: {
      auto s = tree_schema(Task::Regression, 3, "all");
      s.push_back(integer("n_estimators", 100, 1));
      s.push_back(real("learning_rate", 0.1, 0.0, kInf));
      s.push_back(real("subsample", 1.0, 0.0, 1.0, true));
      return s;
    }
    case EstimatorKind::AdaReg:
      return {integer("n_estimators", 50, 1), real("learning_rate", 1.0, 0.0, kInf, true),
              categorical("loss", "linear", {"linear", "square", "exponential"})};
    case EstimatorKind::AdaClf:
      return {integer("n_estimators", 50, 1), real("learning_rate", 1.0, 0.0, kInf, true)};
    case EstimatorKind::MlpReg:
    case EstimatorKind::MlpClf: return mlp_schema();
    case EstimatorKind::LogReg:
      return {real("C", 1.0, 0.0, kInf, true), categorical("penalty", "l2", {"l2", "l1"}),
              integer("max_iter", 10000, 1), real("tol", 1e-6, 0.0, kInf, true)};
    case EstimatorKind::Gnb: return {real("var_smoothing", 1e-9, 0.0, kInf)};
    case EstimatorKind::Gpr:
      return {text("kernel", "1**2 * RBF(length_scale=1) + WhiteKernel(noise_level=1)"),
              real("alpha", 1e-10, 0.0, kInf)};
  }
  return {};
}

std::string describe_bound(const ParamSchema& s) {
  std::string lo = std::isinf(s.lo) ? "-inf" : format_sig(s.lo, 6);
  std::string hi = std::isinf(s.hi) ? "inf" : format_sig(s.hi, 6);
  return std::string(s.lo_open ? "(" : "[") + lo + ", " + hi + (s.hi_open ? ")" : "]");
}

}  // namespace

std::string_view kind_name(EstimatorKind kind) { return info(kind).name; }

EstimatorKind parse_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& k : kKinds) {
    if (k.name == lower) return k.kind;
  }
  if (lower == "svr" || lower == "svc" || lower == "svm" || lower == "gpc") {
    throw UnsupportedKindError("estimator kind '" + lower + "' is not implemented");
  }
  throw SpecError("unknown estimator kind '" + std::string(name) + "'");
}

Task task_of(EstimatorKind kind) { return info(kind).task; }

std::string_view task_name(Task task) {
  return task == Task::Regression ? "regression" : "classification";
}

const std::vector<EstimatorKind>& all_kinds() {
  static const std::vector<EstimatorKind> kinds = [] {
    std::vector<EstimatorKind> out;
    for (const auto& k : kKinds) out.push_back(k.kind);
    return out;
  }();
  return kinds;
}

std::vector<EstimatorKind> kinds_for(Task task) {
  std::vector<EstimatorKind> out;
  for (const auto& k : kKinds) {
    if (k.task == task) out.push_back(k.kind);
  }
  return out;
}

bool is_stochastic(EstimatorKind kind) { return info(kind).stochastic; }

std::string hyper_to_string(const HyperValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&value)) return format_sig(*d, 17);
  return std::get<std::string>(value);
}

double EstimatorSpec::real(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw SpecError("missing hyperparameter '" + name + "'");
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
  throw SpecError("hyperparameter '" + name + "' is not numeric");
}

std::int64_t EstimatorSpec::integer(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw SpecError("missing hyperparameter '" + name + "'");
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
  throw SpecError("hyperparameter '" + name + "' is not an integer");
}

const std::string& EstimatorSpec::text(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw SpecError("missing hyperparameter '" + name + "'");
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw SpecError("hyperparameter '" + name + "' is not a string");
}

const std::vector<ParamSchema>& param_schema(EstimatorKind kind) {
  static const auto table = [] {
    std::map<EstimatorKind, std::vector<ParamSchema>> t;
    for (const auto& k : kKinds) t[k.kind] = build_schema(k.kind);
    return t;
  }();
  return table.at(kind);
}

EstimatorSpec resolve_spec(const EstimatorSpec& spec) {
  const auto& schema = param_schema(spec.kind);
  const std::string kname(kind_name(spec.kind));
  for (const auto& [name, value] : spec.params) {
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&](const ParamSchema& s) { return s.name == name; });
    if (!known) throw SpecError(kname + ": unknown hyperparameter '" + name + "'");
  }

  EstimatorSpec out(spec.kind, {}, spec.seed);
  for (const auto& s : schema) {
    auto it = spec.params.find(s.name);
    HyperValue value = it == spec.params.end() ? s.fallback : it->second;
    const std::string where = kname + "." + s.name;
    switch (s.type) {
      case ParamType::Real: {
        double v;
        if (const auto* d = std::get_if<double>(&value)) {
          v = *d;
        } else if (const auto* i = std::get_if<std::int64_t>(&value)) {
          v = static_cast<double>(*i);
        } else {
          throw SpecError(where + " must be a real number");
        }
        const bool ok = std::isfinite(v) && (s.lo_open ? v > s.lo : v >= s.lo) &&
                        (s.hi_open ? v < s.hi : v <= s.hi);
        if (!ok) throw SpecError(where + "=" + format_sig(v, 6) + " outside " + describe_bound(s));
        value = v;
        break;
      }
      case ParamType::Integer: {
        std::int64_t v;
        if (const auto* i = std::get_if<std::int64_t>(&value)) {
          v = *i;
        } else if (const auto* d = std::get_if<double>(&value);
                   d && std::isfinite(*d) && std::floor(*d) == *d) {
          v = static_cast<std::int64_t>(*d);
        } else {
          throw SpecError(where + " must be an integer");
        }
        const bool unlimited = s.minus_one_unlimited && v == -1;
        const auto dv = static_cast<double>(v);
        if (!unlimited && (dv < s.lo || dv > s.hi)) {
          throw SpecError(where + "=" + std::to_string(v) + " outside " + describe_bound(s) +
                          (s.minus_one_unlimited ? " (or -1 for unlimited)" : ""));
        }
        value = v;
        break;
      }
      case ParamType::Categorical: {
        const auto* str = std::get_if<std::string>(&value);
        if (!str || std::find(s.choices.begin(), s.choices.end(), *str) == s.choices.end()) {
          std::string allowed;
          for (const auto& c : s.choices) allowed += (allowed.empty() ? "" : ", ") + c;
          throw SpecError(where + " must be one of {" + allowed + "}");
        }
        break;
      }
      case ParamType::Text:
        if (!std::holds_alternative<std::string>(value)) {
          throw SpecError(where + " must be a string");
        }
        break;
    }
    out.params[s.name] = value;
  }
  return out;
}

}  // namespace clad
