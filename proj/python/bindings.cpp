#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"
#include "cladbench/eval.hpp"
#include "cladbench/features.hpp"
#include "cladbench/models.hpp"
#include "cladbench/tune.hpp"

namespace py = pybind11;
using namespace clad;

namespace {

Hyperparameters params_from(const py::dict& d) {
  Hyperparameters out;
  for (const auto& [k, v] : d) {
    const auto name = py::cast<std::string>(k);
    if (py::isinstance<py::bool_>(v)) {
      out[name] = static_cast<std::int64_t>(py::cast<bool>(v));
    } else if (py::isinstance<py::int_>(v)) {
      out[name] = py::cast<std::int64_t>(v);
    } else if (py::isinstance<py::float_>(v)) {
      out[name] = py::cast<double>(v);
    } else {
      out[name] = py::cast<std::string>(py::str(v));
    }
  }
  return out;
}

py::dict params_to(const Hyperparameters& p) {
  py::dict d;
  for (const auto& [k, v] : p) std::visit([&](const auto& x) { d[py::str(k)] = x; }, v);
  return d;
}

py::dict dataset_columns(const Dataset& ds) {
  const auto n = static_cast<Eigen::Index>(ds.size());
  Vector power(n), velocity(n), feed(n), radius(n), width(n), height(n), depth(n), dilution(n), label(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = ds.records[static_cast<std::size_t>(i)];
    const auto& q = ds.labels[static_cast<std::size_t>(i)];
    power(i) = r.power;
    velocity(i) = r.velocity;
    feed(i) = r.feed_rate;
    radius(i) = r.beam_radius;
    width(i) = r.width;
    height(i) = r.height;
    depth(i) = r.depth;
    dilution(i) = q.dilution;
    label(i) = static_cast<int>(q.value);
  }
  py::dict d;
  d["power_w"] = power;
  d["velocity_mm_s"] = velocity;
  d["feed_rate_g_s"] = feed;
  d["beam_radius_mm"] = radius;
  d["width_um"] = width;
  d["height_um"] = height;
  d["depth_um"] = depth;
  d["dilution"] = dilution;
  d["label"] = label;
  return d;
}

std::span<const double> sp(const Vector& v) { return as_span(v); }

}  // namespace

PYBIND11_MODULE(_cladbench, m) {
  m.doc() = "native core of cladbench";
  auto base = py::register_exception<Error>(m, "CladError", PyExc_RuntimeError);
  (void)base;

  m.def("volumetric_energy_density", &volumetric_energy_density, py::arg("power"), py::arg("velocity"),
        py::arg("radius"));
  m.def("linear_mass_density", &linear_mass_density, py::arg("feed_rate"), py::arg("velocity"));
  m.def("compute_dilution", &compute_dilution, py::arg("depth"), py::arg("height"));

  m.def(
      "synthesize",
      [](std::uint64_t seed, std::size_t n_experiment, std::size_t n_cfd, double noise_sd, double beam_radius) {
        SurrogateConfig cfg;
        cfg.seed = seed;
        cfg.n_experiment = n_experiment;
        cfg.n_cfd = n_cfd;
        cfg.noise_sd = noise_sd;
        cfg.beam_radius = beam_radius;
        return dataset_columns(synthesize_dataset(cfg));
      },
      py::arg("seed") = 42, py::arg("n_experiment") = 90, py::arg("n_cfd") = 235, py::arg("noise_sd") = 0.05,
      py::arg("beam_radius") = 1.5);
  m.def("load_dataset", [](const std::string& path) { return dataset_columns(load_dataset(path)); });
  m.def(
      "feature_matrix",
      [](const Vector& power, const Vector& velocity, const Vector& feed, const Vector& radius,
         const std::string& featureset) {
        const FeatureSet fs = parse_featureset(featureset);
        Matrix out(power.size(), static_cast<Eigen::Index>(feature_count(fs)));
        for (Eigen::Index i = 0; i < power.size(); ++i) {
          const auto row = featurize(power(i), velocity(i), feed(i), radius(i)).visible(fs);
          for (std::size_t c = 0; c < row.size(); ++c) out(i, static_cast<Eigen::Index>(c)) = row[c];
        }
        return out;
      },
      py::arg("power"), py::arg("velocity"), py::arg("feed_rate"), py::arg("beam_radius"),
      py::arg("featureset") = "full");

  m.def("r2_score", [](const Vector& a, const Vector& p) { return r2_score(sp(a), sp(p)); });
  m.def("mae", [](const Vector& a, const Vector& p) { return mae(sp(a), sp(p)); });
  m.def("accuracy", [](const Vector& a, const Vector& p) { return accuracy(sp(a), sp(p)); });
  m.def("roc_auc", [](const Vector& a, const Vector& s) { return auc(roc_curve(sp(a), sp(s))); });
  m.def("confusion_matrix", [](const Vector& a, const Vector& p) {
    const Confusion c = confusion_matrix(sp(a), sp(p));
    return std::vector<std::vector<std::size_t>>{{c.tn, c.fp}, {c.fn, c.tp}};
  });

  m.def("kinds", [] {
    std::vector<std::string> out;
    for (auto k : all_kinds()) out.emplace_back(kind_name(k));
    return out;
  });
  m.def("complexity", [](const std::string& kind) { return complexity_of(parse_kind(kind)).expression; });

  py::class_<TrainedModel>(m, "Model")
      .def_static(
          "fit",
          [](const std::string& kind, const Matrix& x, const Vector& y, const py::dict& params, std::uint64_t seed,
             bool normalize, unsigned threads) {
            const EstimatorSpec spec(parse_kind(kind), params_from(params), seed);
            py::gil_scoped_release release;
            return normalize ? TrainedModel::fit_pipeline(spec, x, y, std::nullopt, std::nullopt, threads)
                             : TrainedModel::fit(spec, x, y, threads);
          },
          py::arg("kind"), py::arg("x"), py::arg("y"), py::arg("params") = py::dict(), py::arg("seed") = 0,
          py::arg("normalize") = true, py::arg("threads") = 1)
      .def("predict", &TrainedModel::predict)
      .def("predict_proba", &TrainedModel::predict_proba)
      .def_property_readonly("kind", [](const TrainedModel& t) { return std::string(kind_name(t.kind())); })
      .def_property_readonly("task", [](const TrainedModel& t) { return std::string(task_name(t.task())); })
      .def_property_readonly("params", [](const TrainedModel& t) { return params_to(t.spec().params); })
      .def("to_json", [](const TrainedModel& t) { return model_to_string(t); })
      .def_static("from_json", [](const std::string& text) { return model_from_string(text); });

  m.def(
      "random_search",
      [](const std::string& kind, const Matrix& x, const Vector& y, std::size_t k, std::size_t n_iter,
         std::uint64_t seed, unsigned threads) {
        const EstimatorKind ek = parse_kind(kind);
        const SearchSpace space = default_search_space(ek, task_of(ek));
        SearchResult r;
        {
          py::gil_scoped_release release;
          r = random_search(space, x, y, k, n_iter, seed, threads);
        }
        py::list scores;
        for (const auto& t : r.trials) scores.append(t.error ? py::none() : py::cast(t.mean_score));
        py::dict out;
        out["best"] = r.best;
        out["best_params"] = params_to(r.best_trial().spec.params);
        out["best_score"] = r.best_trial().mean_score;
        out["scores"] = scores;
        return out;
      },
      py::arg("kind"), py::arg("x"), py::arg("y"), py::arg("k") = 5, py::arg("n_iter") = 10, py::arg("seed") = 0,
      py::arg("threads") = 1);
}
