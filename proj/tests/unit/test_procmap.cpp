#include <sstream>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"
#include "cladbench/procmap.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clad;

namespace {

struct Fixture {
  Dataset ds;
  Fixture() {
    SurrogateConfig cfg;
    cfg.seed = 12;
    cfg.n_experiment = 30;
    cfg.n_cfd = 50;
    ds = synthesize_dataset(cfg);
  }
  Vector target(Target t) const {
    const auto v = target_values(ds, t);
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
};

GridSpec small_grid() {
  GridSpec g;
  g.power = parse_axis("100:500:5");
  g.velocity = parse_axis("2:20:4");
  g.feed_rate = 0.25;
  return g;
}

}  // namespace

TEST_SUITE("procmap") {

TEST_CASE("axes") {
  const Axis a = parse_axis("100:500:5");
  CHECK(a.at(0) == 100.0);
  CHECK(a.at(2) == 300.0);
  CHECK(a.at(4) == 500.0);
  const Axis b = parse_axis("0.1:0.7:7");
  CHECK(b.at(6) == 0.7);
  CHECK_THROWS_AS(parse_axis("1:2"), ConfigError);
  GridSpec bad = small_grid();
  bad.velocity.min = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("grid layout and bitwise node values") {
  const Fixture f;
  const GridSpec grid = small_grid();
  const auto model = TrainedModel::fit_pipeline({EstimatorKind::RfReg, {{"n_estimators", std::int64_t{10}}}, 3},
                                                feature_matrix(f.ds, FeatureSet::Full), f.target(Target::Width),
                                                FeatureSet::Full, Target::Width);
  const ProcessMap map = predict_geometry_map(model, grid, 2);
  CHECK(map.kind == MapKind::Width);
  REQUIRE(map.values.rows() == 4);
  REQUIRE(map.values.cols() == 5);
  for (std::size_t v = 0; v < 4; ++v) {
    for (std::size_t p = 0; p < 5; ++p) {
      const auto fv = featurize(grid.power.at(p), grid.velocity.at(v), grid.feed_rate, grid.beam_radius);
      const auto row = fv.visible(FeatureSet::Full);
      Matrix one(1, 4);
      for (int c = 0; c < 4; ++c) one(0, c) = row[static_cast<std::size_t>(c)];
      CHECK(model.predict(one)(0) == map.at(v, p));
    }
  }
  CHECK(predict_geometry_map(model, grid, 1).values == map.values);
}

TEST_CASE("quality maps and task checks") {
  const Fixture f;
  const GridSpec grid = small_grid();
  const auto clf = TrainedModel::fit_pipeline({EstimatorKind::LogReg}, feature_matrix(f.ds, FeatureSet::Full),
                                              f.target(Target::Quality), FeatureSet::Full, Target::Quality);
  const QualityMaps q = predict_quality_map(clf, grid);
  for (Eigen::Index i = 0; i < q.label.values.size(); ++i) {
    CHECK(q.label.values.data()[i] == (q.probability.values.data()[i] > 0.5 ? 1.0 : 0.0));
  }
  CHECK_THROWS_AS(predict_geometry_map(clf, grid), TaskError);
  const auto reg = TrainedModel::fit_pipeline({EstimatorKind::Ols}, feature_matrix(f.ds, FeatureSet::MachineOnly),
                                              f.target(Target::Depth), FeatureSet::MachineOnly, Target::Depth);
  CHECK_THROWS_AS(predict_quality_map(reg, grid), TaskError);
  CHECK(predict_geometry_map(reg, grid).kind == MapKind::Depth);
}

TEST_CASE("csv and json round trips") {
  const Fixture f;
  const auto model = TrainedModel::fit_pipeline({EstimatorKind::Gpr}, feature_matrix(f.ds, FeatureSet::Full),
                                                f.target(Target::Height), FeatureSet::Full, Target::Height);
  ProcessMap map = predict_geometry_map(model, small_grid());
  map.model_digest = "0123456789abcdef";
  ExportOptions opts;
  opts.provenance = Json{{"seed", 12}, {"config_digest", "feedface"}};
  std::istringstream csv(map_to_csv(map, opts));
  const ProcessMap a = map_from_csv(csv);
  CHECK(a.values == map.values);
  CHECK(a.grid == map.grid);
  CHECK(a.kind == map.kind);
  CHECK(a.model_digest == map.model_digest);
  const ProcessMap b = map_from_json(map_to_json(map, opts));
  CHECK(b.values == map.values);
  CHECK(b.grid == map.grid);
}

TEST_CASE("svg has one cell per node") {
  ProcessMap map;
  map.grid = small_grid();
  map.kind = MapKind::QualityProb;
  map.values = Matrix::Constant(4, 5, 0.25);
  ExportOptions opts;
  opts.scatter = {{200, 5, 1.0}, {300, 10, 0.0}};
  const std::string svg = map_to_svg(map, opts);
  std::size_t rects = 0;
  for (std::size_t pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) ++rects;
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
  CHECK(rects == 20);
  CHECK(circles == 2);
  CHECK(svg.find("rgb(64,0,191)") != std::string::npos);
}

}
