// cladbench: synthetic clad data, model benchmarks, tuning and process maps.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cladbench/data.hpp"
#include "cladbench/digest.hpp"
#include "cladbench/error.hpp"
#include "cladbench/eval.hpp"
#include "cladbench/features.hpp"
#include "cladbench/models.hpp"
#include "cladbench/procmap.hpp"
#include "cladbench/tune.hpp"

namespace {

using namespace clad;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;
constexpr int kSchemaVersion = 1;

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_bytes(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::uint64_t default_seed() {
  const char* env = std::getenv("CLADBENCH_SEED");
  if (!env || !*env) return 42;
  std::uint64_t v = 0;
  std::istringstream in(env);
  if (!(in >> v) || !in.eof()) throw ConfigError("CLADBENCH_SEED must be a non-negative integer");
  return v;
}

// Output paths and thread counts are left out: neither may change results.
struct Provenance {
  std::uint64_t seed = 0;
  std::string digest;

  Json json() const { return Json{{"seed", seed}, {"config_digest", digest}, {"schema_version", kSchemaVersion}}; }
  std::vector<std::string> comments() const {
    return {"seed: " + std::to_string(seed), "config_digest: " + digest,
            "schema_version: " + std::to_string(kSchemaVersion)};
  }
};

Provenance provenance(const std::string& command, std::uint64_t seed, Json config) {
  config["command"] = command;
  config["seed"] = seed;
  return {seed, digest_hex(config.dump())};
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError(std::string(what) + " must look like lo:hi");
  try {
    std::size_t used = 0;
    const double lo = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("lo");
    const std::string rest = text.substr(colon + 1);
    const double hi = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(what) + " '" + text + "' is not lo:hi");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Family aliases resolve against the task of the requested target.
EstimatorKind resolve_model_name(const std::string& name, Task task) {
  static const std::map<std::string, std::pair<EstimatorKind, EstimatorKind>> families{
      {"gb", {EstimatorKind::Gbr, EstimatorKind::Gbc}},
      {"rf", {EstimatorKind::RfReg, EstimatorKind::RfClf}},
      {"dt", {EstimatorKind::DtReg, EstimatorKind::DtClf}},
      {"knn", {EstimatorKind::KnnReg, EstimatorKind::KnnClf}},
      {"ada", {EstimatorKind::AdaReg, EstimatorKind::AdaClf}},
      {"ab", {EstimatorKind::AdaReg, EstimatorKind::AdaClf}},
      {"mlp", {EstimatorKind::MlpReg, EstimatorKind::MlpClf}},
      {"nn", {EstimatorKind::MlpReg, EstimatorKind::MlpClf}},
  };
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (auto it = families.find(lower); it != families.end()) {
    return task == Task::Regression ? it->second.first : it->second.second;
  }
  if (lower == "lr") return EstimatorKind::LogReg;
  EstimatorKind kind;
  try {
    kind = parse_kind(lower);
  } catch (const SpecError&) {
    std::string supported;
    for (auto k : all_kinds()) supported += (supported.empty() ? "" : ", ") + std::string(kind_name(k));
    throw SpecError("unknown model kind '" + name + "'; supported: " + supported + ", all");
  }
  if (task_of(kind) != task) {
    throw SpecError("model '" + name + "' is a " + std::string(task_name(task_of(kind))) + " model but the target needs " +
                    std::string(task_name(task)));
  }
  return kind;
}

std::vector<EstimatorKind> resolve_models(const std::string& list, Task task) {
  std::vector<EstimatorKind> out;
  for (const auto& name : split_list(list)) {
    if (name == "all") {
      for (auto k : kinds_for(task)) out.push_back(k);
    } else {
      out.push_back(resolve_model_name(name, task));
    }
  }
  if (out.empty()) throw ConfigError("--model: no model given");
  std::vector<EstimatorKind> unique;
  for (auto k : out) {
    if (std::find(unique.begin(), unique.end(), k) == unique.end()) unique.push_back(k);
  }
  return unique;
}

// --param name=value; integers, reals, otherwise text.
Hyperparameters parse_params(const std::vector<std::string>& items) {
  Hyperparameters out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param '" + item + "' must be name=value");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    try {
      const long long i = std::stoll(value, &used);
      if (used == value.size()) {
        out[name] = static_cast<std::int64_t>(i);
        continue;
      }
    } catch (const std::logic_error&) {
    }
    try {
      const double d = std::stod(value, &used);
      if (used == value.size()) {
        out[name] = d;
        continue;
      }
    } catch (const std::logic_error&) {
    }
    out[name] = value;
  }
  return out;
}

// Overrides apply only to parameters the kind knows about.
Hyperparameters params_for(EstimatorKind kind, const std::string& preset, const Hyperparameters& overrides) {
  Hyperparameters p = preset == "reference" ? reference_hyperparameters(kind) : Hyperparameters{};
  const auto& schema = param_schema(kind);
  for (const auto& [name, value] : overrides) {
    if (std::any_of(schema.begin(), schema.end(), [&](const ParamSchema& s) { return s.name == name; })) {
      p[name] = value;
    }
  }
  return p;
}

std::vector<Target> resolve_targets(const std::string& list) {
  std::vector<Target> out;
  for (const auto& name : split_list(list)) {
    try {
      out.push_back(parse_target(name));
    } catch (const Error&) {
      throw ConfigError("unknown target '" + name + "' (width, height, depth, quality)");
    }
  }
  if (out.empty()) throw ConfigError("--target: no target given");
  return out;
}

FeatureSet resolve_features(const std::string& name) {
  try {
    return parse_featureset(name);
  } catch (const Error&) {
    throw ConfigError("--features must be machine or full");
  }
}

void print_summary(const Dataset& ds) {
  const auto s = summarize_distribution(ds);
  std::cout << "records: " << ds.size() << "\n";
  std::cout << "desirable (class 0): " << s.desirable << "\n";
  std::cout << "undesirable (class 1): " << s.undesirable << "\n";
  auto field = [](const char* name, const FieldSummary& f) {
    std::printf("%-7s min %.4g  max %.4g  mean %.4g  std %.4g um\n", name, f.min, f.max, f.mean, f.std);
  };
  field("width", s.width);
  field("height", s.height);
  field("depth", s.depth);
}

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t n_exp = 90;
  std::size_t n_cfd = 235;
  double noise = 0.05;
  double radius = 1.5;
  std::string power = "100:500";
  std::string velocity = "2:20";
  std::string feed = "0.05:0.5";
  std::string out;
};

int cmd_synth(const SynthOptions& o) {
  SurrogateConfig cfg;
  cfg.seed = o.seed;
  cfg.n_experiment = o.n_exp;
  cfg.n_cfd = o.n_cfd;
  cfg.noise_sd = o.noise;
  cfg.beam_radius = o.radius;
  auto [p0, p1] = parse_range(o.power, "--power");
  auto [v0, v1] = parse_range(o.velocity, "--velocity");
  auto [f0, f1] = parse_range(o.feed, "--feed");
  cfg.power_range = {p0, p1};
  cfg.velocity_range = {v0, v1};
  cfg.feed_range = {f0, f1};
  cfg.validate();
  const auto prov = provenance("synth", o.seed,
                               Json{{"n_exp", o.n_exp}, {"n_cfd", o.n_cfd}, {"noise", o.noise},
                                    {"radius", o.radius}, {"power", {p0, p1}}, {"velocity", {v0, v1}},
                                    {"feed", {f0, f1}}});
  const Dataset ds = synthesize_dataset(cfg);
  save_dataset(ds, o.out, prov.comments());
  print_summary(ds);
  std::cout << "wrote " << o.out << "\n";
  return 0;
}

struct ModelOptions {
  std::uint64_t seed = 0;
  std::string input;
  std::string features = "full";
  std::string models;
  std::string targets;
  std::size_t k = 5;
  std::size_t n_iter = kDefaultSearchIterations;
  double test_fraction = 0.2;
  bool tune = false;
  std::string preset = "default";
  std::vector<std::string> params;
  unsigned threads = 1;
  std::string out;
  std::string artifact;
};

Json common_config(const ModelOptions& o, const std::string& data_bytes) {
  return Json{{"data_digest", digest_hex(data_bytes)}, {"features", o.features}, {"models", o.models},
              {"targets", o.targets}, {"k", o.k}, {"n_iter", o.n_iter}, {"test_fraction", o.test_fraction},
              {"tune", o.tune}, {"preset", o.preset}, {"params", o.params}};
}

Dataset parse_dataset(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_dataset_csv(in);
}

struct SummaryRow {
  std::string target;
  std::string model;
  double primary = 0.0;    // r2 or accuracy
  double secondary = 0.0;  // mae or auc
};

int cmd_benchmark(const ModelOptions& o) {
  const std::string bytes = read_bytes(o.input);
  const Dataset ds = parse_dataset(bytes);
  const FeatureSet fs = resolve_features(o.features);
  std::string target_list = o.targets;
  if (target_list.empty()) target_list = o.models == "all" ? "width,height,depth,quality" : "width,height,depth";
  const auto targets = resolve_targets(target_list);
  const Hyperparameters overrides = parse_params(o.params);
  if (o.preset != "default" && o.preset != "reference") throw ConfigError("--params must be default or reference");

  std::vector<std::pair<Target, std::vector<EstimatorKind>>> plan;
  for (Target t : targets) {
    const Task task = is_classification_target(t) ? Task::Classification : Task::Regression;
    plan.emplace_back(t, resolve_models(o.models, task));
  }

  const auto prov = provenance("benchmark", o.seed, common_config(o, bytes));
  Json reports = Json::array();
  std::vector<SummaryRow> rows;
  for (const auto& [target, kinds] : plan) {
    const Holdout h = make_holdout(ds, fs, target, o.test_fraction, o.seed);
    for (EstimatorKind kind : kinds) {
      EstimatorSpec spec(kind, params_for(kind, o.preset, overrides), o.seed);
      Json tuning = nullptr;
      if (o.tune) {
        SearchSpace space = default_search_space(kind, task_of(kind));
        space.fixed = spec.params;
        for (const auto& [name, _] : space.params) space.fixed.erase(name);
        const SearchResult sr = random_search(space, h.x_train, h.y_train, o.k, o.n_iter, o.seed, o.threads);
        spec = sr.best_trial().spec;
        tuning = Json{{"best", sr.best}, {"n_iter", o.n_iter}, {"k", o.k}, {"best_mean_score", sr.best_trial().mean_score}};
      }
      const TrainedModel model = TrainedModel::fit_pipeline(spec, h.x_train, h.y_train, fs, target, o.threads);
      Json report;
      SummaryRow row{std::string(target_name(target)), std::string(kind_name(kind))};
      const SplitInfo split{o.seed, o.test_fraction, std::nullopt};
      if (model.task() == Task::Regression) {
        const auto r = evaluate_regression(model, h.x_test, h.y_test);
        report = report_to_json(r, split);
        row.primary = r.r2;
        row.secondary = r.mae;
      } else {
        const auto r = evaluate_classification(model, h.x_test, h.y_test);
        report = report_to_json(r, split);
        row.primary = r.accuracy;
        row.secondary = r.auc;
      }
      report["hyperparameters"] = hyperparameters_to_json(model.spec().params);
      report["model_seed"] = model.spec().seed;
      report["complexity"] = model.complexity().expression;
      report["fit_notes"] = model.meta().notes;
      if (!tuning.is_null()) report["tuning"] = tuning;
      reports.push_back(std::move(report));
      rows.push_back(row);
    }
  }

  // Ranked within each target: higher r2 / accuracy first, then lower mae / higher auc.
  auto target_pos = [&](const std::string& t) {
    for (std::size_t i = 0; i < plan.size(); ++i) {
      if (target_name(plan[i].first) == t) return i;
    }
    return plan.size();
  };
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = target_pos(rows[a].target);
    const auto pb = target_pos(rows[b].target);
    if (pa != pb) return pa < pb;
    if (rows[a].primary != rows[b].primary) return rows[a].primary > rows[b].primary;
    const bool clf = rows[a].target == "quality";
    return clf ? rows[a].secondary > rows[b].secondary : rows[a].secondary < rows[b].secondary;
  });

  Json summary = Json::array();
  std::map<std::string, int> rank;
  std::string table = "target   rank  model     metric1    metric2\n";
  for (std::size_t i : order) {
    const auto& r = rows[i];
    const int place = ++rank[r.target];
    const bool clf = r.target == "quality";
    summary.push_back(Json{{"target", r.target}, {"rank", place}, {"model", r.model},
                           {clf ? "accuracy" : "r2", r.primary}, {clf ? "auc" : "mae", r.secondary}});
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %4d  %-8s %s %.6f  %s %.6f\n", r.target.c_str(), place, r.model.c_str(),
                  clf ? "acc" : "r2 ", r.primary, clf ? "auc" : "mae", r.secondary);
    table += line;
  }
  Json doc{{"schema_version", kSchemaVersion}, {"provenance", prov.json()}, {"reports", reports}, {"summary", summary}};
  if (!o.out.empty()) write_bytes(o.out, doc.dump(1) + "\n");
  std::cout << table;
  return 0;
}

int cmd_tune(const ModelOptions& o) {
  const std::string bytes = read_bytes(o.input);
  const Dataset ds = parse_dataset(bytes);
  const FeatureSet fs = resolve_features(o.features);
  const auto targets = resolve_targets(o.targets.empty() ? "depth" : o.targets);
  if (targets.size() != 1) throw ConfigError("tune takes exactly one --target");
  const Target target = targets.front();
  const Task task = is_classification_target(target) ? Task::Classification : Task::Regression;
  const auto kinds = resolve_models(o.models, task);
  if (kinds.size() != 1) throw ConfigError("tune takes exactly one --model");
  const EstimatorKind kind = kinds.front();
  const Hyperparameters overrides = parse_params(o.params);

  const auto prov = provenance("tune", o.seed, common_config(o, bytes));
  const Holdout h = make_holdout(ds, fs, target, o.test_fraction, o.seed);
  SearchSpace space = default_search_space(kind, task);
  space.fixed = params_for(kind, "default", overrides);
  for (const auto& [name, _] : space.params) space.fixed.erase(name);
  const SearchResult sr = random_search(space, h.x_train, h.y_train, o.k, o.n_iter, o.seed, o.threads);
  const TrainedModel model = TrainedModel::fit_pipeline(sr.best_trial().spec, h.x_train, h.y_train, fs, target, o.threads);

  Json doc = search_to_json(sr);
  doc["provenance"] = prov.json();
  doc["target"] = std::string(target_name(target));
  doc["featureset"] = std::string(featureset_name(fs));
  const SplitInfo split{o.seed, o.test_fraction, std::nullopt};
  if (task == Task::Regression) {
    doc["holdout"] = report_to_json(evaluate_regression(model, h.x_test, h.y_test), split);
  } else {
    doc["holdout"] = report_to_json(evaluate_classification(model, h.x_test, h.y_test), split);
  }
  if (!o.out.empty()) write_bytes(o.out, doc.dump(1) + "\n");
  const std::string artifact = o.artifact.empty() ? (o.out.empty() ? "model.json" : o.out + ".model.json") : o.artifact;
  save_model(model, artifact, prov.json());
  std::printf("trials: %zu  best: %zu  mean %s: %.6f\n", sr.trials.size(), sr.best,
              task == Task::Regression ? "val mse" : "val accuracy", sr.best_trial().mean_score);
  std::cout << "wrote " << artifact << "\n";
  return 0;
}

struct MapOptions {
  std::uint64_t seed = 0;
  std::string artifact;
  std::string kind;
  std::string grid = "100:500:50,2:20:50";
  double feed = 0.2;
  double radius = 1.5;
  std::string formats = "csv,json";
  std::string scatter;
  unsigned threads = 1;
  std::string out = "map";
};

int cmd_procmap(const MapOptions& o) {
  const std::string bytes = read_bytes(o.artifact);
  const TrainedModel model = model_from_string(bytes);
  const auto comma = o.grid.find(',');
  if (comma == std::string::npos) throw ConfigError("--grid must look like p0:p1:np,v0:v1:nv");
  GridSpec grid;
  grid.power = parse_axis(o.grid.substr(0, comma));
  grid.velocity = parse_axis(o.grid.substr(comma + 1));
  grid.feed_rate = o.feed;
  grid.beam_radius = o.radius;
  grid.validate();
  std::vector<MapFormat> formats;
  for (const auto& f : split_list(o.formats)) formats.push_back(parse_map_format(f));
  if (formats.empty()) throw ConfigError("--format: no format given");

  std::string kind = o.kind;
  if (kind.empty()) kind = model.meta().target ? std::string(target_name(*model.meta().target)) :
                           (model.task() == Task::Classification ? "quality" : "width");
  const Target wanted = resolve_targets(kind).front();

  ExportOptions opts;
  opts.provenance = provenance("procmap", o.seed,
                               Json{{"artifact_digest", digest_hex(bytes)}, {"kind", kind}, {"grid", o.grid},
                                    {"feed", o.feed}, {"radius", o.radius}, {"formats", o.formats},
                                    {"scatter_digest", o.scatter.empty() ? "" : digest_hex(read_bytes(o.scatter))}})
                        .json();

  std::vector<ProcessMap> maps;
  if (is_classification_target(wanted)) {
    auto q = predict_quality_map(model, grid, o.threads);
    maps = {q.label, q.probability};
  } else {
    if (model.task() != Task::Regression) throw TaskError("--kind " + kind + " needs a regression artifact");
    if (model.meta().target && *model.meta().target != wanted) {
      throw TaskError("artifact predicts " + std::string(target_name(*model.meta().target)) + ", not " + kind);
    }
    maps = {predict_geometry_map(model, grid, o.threads)};
    maps[0].kind = wanted == Target::Height ? MapKind::Height : wanted == Target::Depth ? MapKind::Depth : MapKind::Width;
  }
  if (!o.scatter.empty()) {
    const Dataset ds = load_dataset(o.scatter);
    const auto values = target_values(ds, wanted);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      opts.scatter.push_back({ds.records[i].power, ds.records[i].velocity, values[i]});
    }
  }
  for (auto& m : maps) {
    m.model_digest = digest_hex(bytes);
    for (MapFormat f : formats) {
      const std::string path = o.out + "." + std::string(map_kind_name(m.kind)) + "." + std::string(map_format_extension(f));
      export_map(m, f, path, opts);
      std::cout << "wrote " << path << "\n";
    }
  }
  return 0;
}

int exit_code(const Error& e) {
  switch (e.error_class()) {
    case ErrorClass::Usage: return kExitUsage;
    case ErrorClass::Data: return kExitData;
    case ErrorClass::Internal: return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cladbench: clad geometry and quality benchmarks on synthetic DED data"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "write a synthetic dataset CSV");
  s->add_option("--seed", synth.seed, "RNG seed (default $CLADBENCH_SEED or 42)")->default_val(seed);
  s->add_option("--n-exp", synth.n_exp, "experiment-tagged records")->default_val(90);
  s->add_option("--n-cfd", synth.n_cfd, "CFD-tagged records")->default_val(235);
  s->add_option("--noise", synth.noise, "relative noise sd (CFD records get half)")->default_val(0.05);
  s->add_option("--radius", synth.radius, "beam radius, mm")->default_val(1.5);
  s->add_option("--power", synth.power, "power range W, lo:hi")->default_val("100:500");
  s->add_option("--velocity", synth.velocity, "velocity range mm/s, lo:hi")->default_val("2:20");
  s->add_option("--feed", synth.feed, "feed rate range g/s, lo:hi")->default_val("0.05:0.5");
  s->add_option("-o,--out", synth.out, "output CSV")->required();

  auto add_model_options = [&](CLI::App* c, ModelOptions& o, bool tune_cmd) {
    c->add_option("--seed", o.seed, "RNG seed (default $CLADBENCH_SEED or 42)")->default_val(seed);
    c->add_option("-i,--input", o.input, "dataset CSV")->required();
    c->add_option("--features", o.features, "machine or full")->default_val("full");
    c->add_option("--model", o.models, "kind, family alias, comma list or all")->required();
    c->add_option("--target", o.targets, "width, height, depth or quality (comma list for benchmark)");
    c->add_option("--k", o.k, "cross-validation folds")->default_val(5);
    c->add_option("--n-iter", o.n_iter, "random search trials")->default_val(kDefaultSearchIterations);
    c->add_option("--test-fraction", o.test_fraction, "held-out share")->default_val(0.2);
    c->add_option("--param", o.params, "hyperparameter override name=value (repeatable)");
    c->add_option("--threads", o.threads, "worker threads (results do not depend on it)")->default_val(1);
    c->add_option("-o,--out", o.out, "output JSON");
    if (!tune_cmd) {
      c->add_flag("--tune", o.tune, "random-search each model on the training split first");
      c->add_option("--params", o.preset, "default or reference hyperparameters")->default_val("default");
    } else {
      c->add_option("--artifact", o.artifact, "model artifact path (default <out>.model.json)");
    }
  };
  ModelOptions bench;
  auto* b = app.add_subcommand("benchmark", "fit, evaluate and rank models on an 80:20 split");
  add_model_options(b, bench, false);
  ModelOptions tune;
  auto* t = app.add_subcommand("tune", "randomized search, then refit the winner and save it");
  add_model_options(t, tune, true);

  MapOptions map;
  auto* m = app.add_subcommand("procmap", "evaluate a model artifact over a power x velocity grid");
  m->add_option("--seed", map.seed, "recorded in outputs")->default_val(seed);
  m->add_option("--artifact,--model-file", map.artifact, "model artifact JSON")->required();
  m->add_option("--kind", map.kind, "width, height, depth or quality (default: artifact target)");
  m->add_option("--grid", map.grid, "p0:p1:np,v0:v1:nv")->default_val("100:500:50,2:20:50");
  m->add_option("--feed", map.feed, "fixed feed rate g/s")->default_val(0.2);
  m->add_option("--radius", map.radius, "fixed beam radius mm")->default_val(1.5);
  m->add_option("--format", map.formats, "comma list of csv, json, svg")->default_val("csv,json");
  m->add_option("--scatter", map.scatter, "dataset CSV overlaid on the SVG");
  m->add_option("--threads", map.threads, "worker threads")->default_val(1);
  m->add_option("-o,--out", map.out, "output path prefix")->default_val("map");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*s) return cmd_synth(synth);
    if (*b) return cmd_benchmark(bench);
    if (*t) return cmd_tune(tune);
    if (*m) return cmd_procmap(map);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
