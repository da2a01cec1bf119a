#include <algorithm>
#include <cmath>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"
#include "cladbench/tune.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clad;

TEST_SUITE("tune") {

TEST_CASE("log-uniform median") {
  Rng rng(77);
  std::vector<double> draws;
  const ParamDistribution d = LogUniformReal{1e-2, 1.0};
  for (int i = 0; i < 10000; ++i) draws.push_back(std::get<double>(sample_value(d, rng)));
  std::sort(draws.begin(), draws.end());
  const double median = 0.5 * (draws[4999] + draws[5000]);
  CHECK(median >= 0.08);
  CHECK(median <= 0.12);
  CHECK(draws.front() >= 1e-2);
  CHECK(draws.back() <= 1.0);
}

TEST_CASE("distribution edge cases") {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) CHECK(std::get<std::int64_t>(sample_value(UniformInt{5, 5}, rng)) == 5);
  CHECK_THROWS_AS(validate_distribution(UniformInt{6, 5}), SpecError);
  CHECK_THROWS_AS(validate_distribution(LogUniformReal{0.0, 1.0}), SpecError);
  CHECK_THROWS_AS(validate_distribution(Categorical{}), SpecError);
  CHECK(in_support(UniformReal{0, 1}, HyperValue{0.5}));
  CHECK_FALSE(in_support(UniformInt{1, 3}, HyperValue{std::int64_t{4}}));
}

TEST_CASE("default spaces") {
  CHECK_THROWS_AS(default_search_space("svc", Task::Classification), UnsupportedKindError);
  CHECK_THROWS_AS(default_search_space("svr", Task::Regression), UnsupportedKindError);
  CHECK_THROWS_AS(default_search_space(EstimatorKind::Gbr, Task::Classification), SpecError);
  const SearchSpace gbr = default_search_space(EstimatorKind::Gbr, Task::Regression);
  const auto& n = std::get<UniformInt>(gbr.params.at("n_estimators"));
  CHECK(n.lo == 50);
  CHECK(n.hi == 2000);
  CHECK(default_search_space(EstimatorKind::Ols, Task::Regression).params.empty());
  Rng rng(2);
  for (EstimatorKind kind : all_kinds()) {
    const SearchSpace s = default_search_space(kind, task_of(kind));
    for (int i = 0; i < 5; ++i) {
      const EstimatorSpec spec = sample_candidate(s, rng);
      for (const auto& [name, dist] : s.params) CHECK(in_support(dist, spec.params.at(name)));
      CHECK_NOTHROW(resolve_spec(spec));
    }
  }
}

TEST_CASE("winner is the optimum over its trials") {
  const Matrix x = testutil::random_matrix(60, 3, 4);
  Rng noise(3);
  Vector y = x.col(0) * 4 - x.col(2);
  for (int i = 0; i < 60; ++i) y(i) += 0.2 * noise.normal();
  SearchSpace space = default_search_space(EstimatorKind::Ridge, Task::Regression);
  const SearchResult r = random_search(space, x, y, 5, 15, 21);
  REQUIRE(r.trials.size() == 15);
  std::size_t argmin = 0;
  for (std::size_t t = 1; t < r.trials.size(); ++t) {
    if (r.trials[t].mean_score < r.trials[argmin].mean_score) argmin = t;
  }
  CHECK(r.best == argmin);
  CHECK(r.objective == Objective::ValMseMin);

  // repeated search is identical, also with threads
  const SearchResult again = random_search(space, x, y, 5, 15, 21, 3);
  CHECK(search_to_json(again) == search_to_json(r));
}

TEST_CASE("ties keep the earliest trial") {
  SearchSpace space;
  space.kind = EstimatorKind::KnnClf;
  space.task = Task::Classification;
  space.params["n_neighbors"] = Categorical{{HyperValue{std::int64_t{3}}}};
  const Matrix x = testutil::random_matrix(40, 2, 5);
  Vector y(40);
  for (int i = 0; i < 40; ++i) y(i) = x(i, 0) > 0.5 ? 1.0 : 0.0;
  const SearchResult r = random_search(space, x, y, 4, 6, 8);
  CHECK(r.objective == Objective::ValAccMax);
  CHECK(r.best == 0);
  for (const auto& t : r.trials) CHECK(t.mean_score == r.trials[0].mean_score);
}

TEST_CASE("failing trials are recorded") {
  SearchSpace space;
  space.kind = EstimatorKind::Poly;
  space.params["degree"] = UniformInt{11, 12};  // outside the schema range
  const Matrix x = testutil::random_matrix(20, 1, 6);
  CHECK_THROWS_AS(random_search(space, x, x.col(0), 2, 3, 1), SearchExhaustedError);
}

}
