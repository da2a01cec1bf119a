#include "cladbench/tune.hpp"

#include <algorithm>
#include <cmath>

#include "cladbench/error.hpp"
#include "cladbench/models.hpp"
#include "cladbench/parallel.hpp"

namespace clad {

void validate_distribution(const ParamDistribution& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformReal>) {
          if (!(d.lo < d.hi)) throw SpecError("uniform_real needs lo < hi");
        } else if constexpr (std::is_same_v<T, LogUniformReal>) {
          if (!(d.lo > 0.0 && d.lo < d.hi)) throw SpecError("log_uniform_real needs 0 < lo < hi");
        } else if constexpr (std::is_same_v<T, UniformInt>) {
          if (d.lo > d.hi) throw SpecError("uniform_int needs lo <= hi");
        } else {
          if (d.options.empty()) throw SpecError("categorical needs at least one option");
        }
      },
      dist);
}

HyperValue sample_value(const ParamDistribution& dist, Rng& rng) {
  return std::visit(
      [&](const auto& d) -> HyperValue {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformReal>) {
          return rng.uniform(d.lo, d.hi);
        } else if constexpr (std::is_same_v<T, LogUniformReal>) {
          const double v = std::exp(rng.uniform(std::log(d.lo), std::log(d.hi)));
          return std::clamp(v, d.lo, d.hi);
        } else if constexpr (std::is_same_v<T, UniformInt>) {
          return rng.uniform_int(d.lo, d.hi);
        } else {
          return d.options[rng.index(d.options.size())];
        }
      },
      dist);
}

bool in_support(const ParamDistribution& dist, const HyperValue& value) {
  return std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformReal> || std::is_same_v<T, LogUniformReal>) {
          const auto* v = std::get_if<double>(&value);
          return v && *v >= d.lo && *v <= d.hi;
        } else if constexpr (std::is_same_v<T, UniformInt>) {
          const auto* v = std::get_if<std::int64_t>(&value);
          return v && *v >= d.lo && *v <= d.hi;
        } else {
          return std::find(d.options.begin(), d.options.end(), value) != d.options.end();
        }
      },
      dist);
}

Json distribution_to_json(const ParamDistribution& dist) {
  return std::visit(
      [](const auto& d) -> Json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformReal>) {
          return {{"type", "uniform_real"}, {"lo", d.lo}, {"hi", d.hi}};
        } else if constexpr (std::is_same_v<T, LogUniformReal>) {
          return {{"type", "log_uniform_real"}, {"lo", d.lo}, {"hi", d.hi}};
        } else if constexpr (std::is_same_v<T, UniformInt>) {
          return {{"type", "uniform_int"}, {"lo", d.lo}, {"hi", d.hi}};
        } else {
          Json options = Json::array();
          for (const auto& o : d.options) std::visit([&](const auto& v) { options.push_back(v); }, o);
          return {{"type", "categorical"}, {"options", options}};
        }
      },
      dist);
}

namespace {

Categorical choices(std::initializer_list<const char*> names) {
  Categorical c;
  for (const char* n : names) c.options.emplace_back(std::string(n));
  return c;
}

Categorical int_choices(std::initializer_list<std::int64_t> values) {
  Categorical c;
  for (auto v : values) c.options.emplace_back(v);
  return c;
}

// Halving width sequences starting from one of {256, 128, 64, 32},
// 1 to 6 layers, never narrower than 32.
Categorical hidden_layer_choices() {
  Categorical c;
  for (std::int64_t start : {256, 128, 64, 32}) {
    for (int layers = 1; layers <= 6; ++layers) {
      std::string text;
      std::int64_t width = start;
      for (int l = 0; l < layers; ++l) {
        text += (l ? "," : "") + std::to_string(width);
        width = std::max<std::int64_t>(32, width / 2);
      }
      c.options.emplace_back(text);
    }
  }
  return c;
}

const Categorical kSampleSplit = int_choices({2, 5, 10});
const Categorical kSampleLeaf = int_choices({1, 2, 4});

}  // namespace

SearchSpace default_search_space(EstimatorKind kind, Task task) {
  if (task_of(kind) != task) {
    throw SpecError(std::string(kind_name(kind)) + " is not a " + std::string(task_name(task)) +
                    " estimator");
  }
  SearchSpace s;
  s.kind = kind;
  s.task = task;
  auto& p = s.params;
  switch (kind) {
    case EstimatorKind::Ols: break;
    case EstimatorKind::Poly: p["degree"] = UniformInt{2, 5}; break;
    case EstimatorKind::Ridge:
    case EstimatorKind::Lasso: p["alpha"] = LogUniformReal{1e-4, 1.0}; break;
    case EstimatorKind::KnnReg:
      p["n_neighbors"] = UniformInt{10, 1000};
      p["leaf_size"] = UniformInt{10, 1000};
      p["algorithm"] = choices({"auto", "ball_tree", "kd_tree", "brute"});
      p["weights"] = choices({"distance", "uniform"});
      p["metric"] = choices({"minkowski", "euclidean", "manhattan"});
      break;
    case EstimatorKind::KnnClf:
      p["n_neighbors"] = UniformInt{1, 20};
      p["weights"] = choices({"uniform", "distance"});
      p["algorithm"] = choices({"auto", "ball_tree", "kd_tree", "brute"});
      p["metric"] = choices({"minkowski", "euclidean", "manhattan"});
      break;
    case EstimatorKind::Gbr:
      p["n_estimators"] = UniformInt{50, 2000};
      p["learning_rate"] = LogUniformReal{1e-2, 1.0};
      p["max_features"] = choices({"auto", "sqrt"});
      p["max_depth"] = UniformInt{10, 110};
      p["min_samples_split"] = kSampleSplit;
      p["min_samples_leaf"] = kSampleLeaf;
      break;
    case EstimatorKind::Gbc:
      p["n_estimators"] = UniformInt{50, 1000};
      p["learning_rate"] = LogUniformReal{1e-2, 1.0};
      p["max_features"] = choices({"auto", "sqrt", "log2"});
      p["max_depth"] = UniformInt{2, 10};
      p["subsample"] = UniformReal{0.1, 0.9};
      break;
    case EstimatorKind::RfReg:
      p["n_estimators"] = UniformInt{50, 2000};
      p["max_features"] = choices({"auto", "sqrt"});
      p["max_depth"] = UniformInt{10, 110};
      p["min_samples_split"] = kSampleSplit;
      p["min_samples_leaf"] = kSampleLeaf;
      break;
    case EstimatorKind::RfClf:
      p["n_estimators"] = UniformInt{50, 1000};
      p["max_features"] = choices({"auto", "sqrt", "log2"});
      p["max_depth"] = UniformInt{10, 110};
      p["min_samples_split"] = kSampleSplit;
      p["min_samples_leaf"] = kSampleLeaf;
      p["criterion"] = choices({"gini", "entropy", "log_loss"});
      break;
    case EstimatorKind::DtReg:
      p["max_depth"] = UniformInt{10, 110};
      p["max_features"] = choices({"auto", "sqrt", "log2"});
      p["min_samples_split"] = kSampleSplit;
      p["min_samples_leaf"] = kSampleLeaf;
      break;
    case EstimatorKind::DtClf:
      p["max_depth"] = UniformInt{10, 1000};
      p["max_features"] = choices({"auto", "sqrt", "log2"});
      p["criterion"] = choices({"gini", "entropy"});
      p["min_samples_split"] = kSampleSplit;
      p["min_samples_leaf"] = kSampleLeaf;
      break;
    case EstimatorKind::AdaReg:
      p["n_estimators"] = UniformInt{50, 2000};
      p["learning_rate"] = LogUniformReal{1e-2, 1.0};
      p["loss"] = choices({"linear", "square", "exponential"});
      break;
    case EstimatorKind::AdaClf:
      p["n_estimators"] = UniformInt{50, 1000};
      p["learning_rate"] = LogUniformReal{1e-2, 1.0};
      break;
    case EstimatorKind::MlpReg:
      p["hidden_layer_sizes"] = hidden_layer_choices();
      p["activation"] = choices({"identity", "logistic", "tanh", "relu"});
      p["solver"] = choices({"sgd", "adam"});
      p["learning_rate_init"] = LogUniformReal{1e-4, 1e-2};
      break;
    case EstimatorKind::MlpClf:
      p["hidden_layer_sizes"] = hidden_layer_choices();
      p["activation"] = choices({"identity", "logistic", "tanh", "relu"});
      p["solver"] = choices({"sgd", "adam"});
      p["alpha"] = LogUniformReal{1e-4, 1e-2};
      p["learning_rate"] = choices({"constant"});
      break;
    case EstimatorKind::LogReg:
      p["penalty"] = choices({"l1", "l2"});
      p["C"] = LogUniformReal{1e-5, 10.0};
      break;
    case EstimatorKind::Gnb: p["var_smoothing"] = LogUniformReal{1e-10, 1e-3}; break;
    case EstimatorKind::Gpr:
      p["kernel"] = choices({"RBF(length_scale=1)", "WhiteKernel(noise_level=1)",
                             "Matern(length_scale=1, nu=1.5)", "ConstantKernel(constant_value=1)",
                             "1**2 * RBF(length_scale=1) + WhiteKernel(noise_level=1)"});
      p["alpha"] = LogUniformReal{1e-3, 1e-2};
      break;
  }
  return s;
}

SearchSpace default_search_space(std::string_view kind, Task task) {
  return default_search_space(parse_kind(kind), task);
}

Hyperparameters reference_hyperparameters(EstimatorKind kind) {
  using S = std::string;
  switch (kind) {
    case EstimatorKind::Ols: return {};
    case EstimatorKind::Poly: return {{"degree", std::int64_t{4}}};
    case EstimatorKind::Lasso: return {{"alpha", 0.0045}};
    case EstimatorKind::Ridge: return {{"alpha", 0.012}};
    case EstimatorKind::KnnReg:
      return {{"n_neighbors", std::int64_t{10}}, {"leaf_size", std::int64_t{560}},
              {"algorithm", S("brute")}, {"weights", S("distance")}, {"metric", S("manhattan")}};
    case EstimatorKind::KnnClf:
      return {{"n_neighbors", std::int64_t{15}}, {"weights", S("distance")},
              {"algorithm", S("brute")}, {"metric", S("minkowski")}};
    case EstimatorKind::Gbr:
      return {{"n_estimators", std::int64_t{916}}, {"learning_rate", 0.01},
              {"max_features", S("sqrt")}, {"max_depth", std::int64_t{100}},
              {"min_samples_split", std::int64_t{2}}, {"min_samples_leaf", std::int64_t{1}}};
    case EstimatorKind::Gbc:
      return {{"n_estimators", std::int64_t{50}}, {"learning_rate", 0.5},
              {"max_features", S("log2")}, {"max_depth", std::int64_t{2}}, {"subsample", 0.48}};
    case EstimatorKind::RfReg:
      return {{"n_estimators", std::int64_t{1783}}, {"max_features", S("sqrt")},
              {"max_depth", std::int64_t{10}}, {"min_samples_split", std::int64_t{5}},
              {"min_samples_leaf", std::int64_t{1}}};
    case EstimatorKind::RfClf:
      return {{"n_estimators", std::int64_t{894}}, {"max_features", S("sqrt")},
              {"max_depth", std::int64_t{10}}, {"min_samples_split", std::int64_t{2}},
              {"min_samples_leaf", std::int64_t{4}}, {"criterion", S("entropy")}};
    case EstimatorKind::DtReg:
      return {{"max_depth", std::int64_t{60}}, {"max_features", S("sqrt")},
              {"min_samples_split", std::int64_t{2}}, {"min_samples_leaf", std::int64_t{1}}};
    case EstimatorKind::DtClf:
      return {{"max_depth", std::int64_t{890}}, {"max_features", S("log2")}, {"criterion", S("gini")},
              {"min_samples_split", std::int64_t{2}}, {"min_samples_leaf", std::int64_t{4}}};
    case EstimatorKind::AdaReg:
      return {{"n_estimators", std::int64_t{50}}, {"learning_rate", 1.0}, {"loss", S("square")}};
    case EstimatorKind::AdaClf:
      return {{"n_estimators", std::int64_t{577}}, {"learning_rate", 0.02}};
    case EstimatorKind::MlpReg:
      return {{"hidden_layer_sizes", S("128,64")}, {"activation", S("relu")},
              {"solver", S("lbfgs")}, {"learning_rate_init", 1e-3}};
    case EstimatorKind::MlpClf:
      return {{"hidden_layer_sizes", S("256,128,64,32")}, {"solver", S("sgd")},
              {"activation", S("identity")}, {"alpha", 1e-3}, {"learning_rate", S("constant")}};
    case EstimatorKind::LogReg: return {{"penalty", S("l2")}, {"C", 4.0}};
    case EstimatorKind::Gnb: return {{"var_smoothing", 4e-4}};
    case EstimatorKind::Gpr:
      return {{"kernel", S("1**2 * RBF(length_scale=1) + WhiteKernel(noise_level=1)")}, {"alpha", 1e-2}};
  }
  return {};
}

EstimatorSpec sample_candidate(const SearchSpace& space, Rng& rng) {
  EstimatorSpec spec(space.kind, space.fixed);
  for (const auto& [name, dist] : space.params) {
    validate_distribution(dist);
    spec.params[name] = sample_value(dist, rng);
  }
  return spec;
}

SearchResult random_search(const SearchSpace& space, const Matrix& raw_x, const Vector& y,
                           std::size_t k, std::size_t n_iter, std::uint64_t seed, unsigned threads) {
  if (n_iter == 0) throw ConfigError("random_search: n_iter must be >= 1");
  SearchResult result;
  result.objective = space.task == Task::Regression ? Objective::ValMseMin : Objective::ValAccMax;
  result.seed = seed;
  result.k = k;
  const SplitIndices folds = k_fold_indices(static_cast<std::size_t>(raw_x.rows()), k, seed);
  const Scoring scoring = space.task == Task::Regression ? Scoring::Mse : Scoring::Accuracy;

  // Seeds are fixed before dispatch so scheduling cannot change any trial.
  result.trials.resize(n_iter);
  for (std::size_t t = 0; t < n_iter; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, t + 1);
    Rng rng(trial_seed);
    result.trials[t].spec = sample_candidate(space, rng);
    result.trials[t].spec.seed = derive_seed(trial_seed, 0);
  }
  parallel_for(n_iter, threads, [&](std::size_t t) {
    Trial& trial = result.trials[t];
    try {
      const CvResult cv = cross_validate(trial.spec, raw_x, y, folds, scoring, 1);
      trial.fold_scores = cv.scores;
      trial.mean_score = cv.mean;
      if (!std::isfinite(trial.mean_score)) throw NumericalError("non-finite CV score");
    } catch (const Error& e) {
      trial.error = e.what();
      trial.fold_scores.clear();
      trial.mean_score = 0.0;
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t t = 0; t < n_iter; ++t) {
    const Trial& trial = result.trials[t];
    if (trial.error) continue;
    if (!best) {
      best = t;
      continue;
    }
    const double incumbent = result.trials[*best].mean_score;
    const bool better = result.objective == Objective::ValMseMin ? trial.mean_score < incumbent
                                                                 : trial.mean_score > incumbent;
    if (better) best = t;
  }
  if (!best) {
    std::string detail;
    for (std::size_t t = 0; t < n_iter; ++t) {
      detail += "\n  trial " + std::to_string(t) + ": " + *result.trials[t].error;
    }
    throw SearchExhaustedError("random_search: every candidate failed" + detail);
  }
  result.best = *best;
  return result;
}

SearchResult random_search(const SearchSpace& space, const Dataset& dataset, FeatureSet featureset,
                           Target target, std::size_t k, std::size_t n_iter, std::uint64_t seed,
                           unsigned threads) {
  if (is_classification_target(target) != (space.task == Task::Classification)) {
    throw TaskError("random_search: target does not match the search space task");
  }
  const Matrix x = feature_matrix(dataset, featureset);
  const auto values = target_values(dataset, target);
  const Vector y = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return random_search(space, x, y, k, n_iter, seed, threads);
}

Json search_to_json(const SearchResult& result) {
  Json trials = Json::array();
  for (const auto& t : result.trials) {
    Json j{{"kind", std::string(kind_name(t.spec.kind))},
           {"seed", t.spec.seed},
           {"hyperparameters", hyperparameters_to_json(t.spec.params)},
           {"fold_scores", t.fold_scores},
           {"mean_score", t.error ? Json(nullptr) : Json(t.mean_score)}};
    if (t.error) j["error"] = *t.error;
    trials.push_back(std::move(j));
  }
  return Json{{"schema_version", 1},
              {"objective", result.objective == Objective::ValMseMin ? "val_mse_min" : "val_acc_max"},
              {"split", {{"seed", result.seed}, {"k", result.k}}},
              {"best", result.best},
              {"trials", std::move(trials)}};
}

}  // namespace clad
