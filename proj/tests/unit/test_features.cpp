#include <numbers>

#include "cladbench/error.hpp"
#include "cladbench/features.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clad;

TEST_SUITE("features") {

TEST_CASE("energy and mass density") {
  CHECK(volumetric_energy_density(std::numbers::pi, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // 300 / (10 * pi * 0.25) = 120 / pi
  CHECK(volumetric_energy_density(300, 10, 0.5) == doctest::Approx(38.197186342054880).epsilon(1e-14));
  CHECK(volumetric_energy_density(0, 10, 0.5) == 0.0);
  CHECK(linear_mass_density(0.0, 10) == 0.0);
  CHECK(linear_mass_density(0.2, 10) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK_THROWS_AS(linear_mass_density(0.3, 0), DomainError);
  CHECK_THROWS_AS(volumetric_energy_density(1, 0, 1), DomainError);
  CHECK_THROWS_AS(volumetric_energy_density(1, 1, 0), DomainError);
  const double e = volumetric_energy_density(200, 5, 1.5);
  CHECK(volumetric_energy_density(600, 5, 1.5) == doctest::Approx(3 * e).epsilon(1e-15));
  CHECK(volumetric_energy_density(200, 15, 1.5) == doctest::Approx(e / 3).epsilon(1e-15));
}

TEST_CASE("featurize projections") {
  CladRecord r;
  r.id = "r";
  r.power = 300;
  r.velocity = 10;
  r.feed_rate = 0.2;
  r.beam_radius = 0.5;
  r.height = 1;
  const FeatureVector f = featurize(r);
  const auto full = f.visible(FeatureSet::Full);
  REQUIRE(full.size() == 4);
  CHECK(full[0] == 300);
  CHECK(full[1] == 10);
  CHECK(full[2] == doctest::Approx(120.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(full[3] == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(f.visible(FeatureSet::MachineOnly) == std::vector<double>{300, 10});
  CHECK(feature_count(FeatureSet::Full) == 4);
  CHECK(feature_names(FeatureSet::MachineOnly).size() == 2);
  CHECK(parse_featureset("machine") == FeatureSet::MachineOnly);
  CHECK_THROWS(parse_featureset("all"));
}

TEST_CASE("min-max normalization") {
  const Matrix x = testutil::rows_of({{2, 5}, {4, 5}, {6, 5}});
  const auto p = fit_normalizer(x);
  CHECK(p.min(0) == 2);
  CHECK(p.max(0) == 6);
  const Matrix n = normalize(p, x);
  CHECK(n(0, 0) == 0.0);
  CHECK(n(1, 0) == 0.5);
  CHECK(n(2, 0) == 1.0);
  CHECK(n.col(1).isZero());
  const Matrix outside = normalize(p, testutil::rows_of({{8, 7}}));
  CHECK(outside(0, 0) == 1.5);

  const Matrix r = testutil::random_matrix(30, 3, 4, -5, 9);
  const auto q = fit_normalizer(r);
  const Matrix back = denormalize(q, normalize(q, r));
  CHECK(((back - r).cwiseAbs().array() <= 1e-12 * r.cwiseAbs().array().max(1.0)).all());

  Matrix reversed = r.colwise().reverse();
  CHECK(fit_normalizer(reversed) == q);
  CHECK_THROWS_AS(normalize(q, testutil::rows_of({{1, 2}})), ShapeError);
  CHECK_THROWS_AS(fit_normalizer(Matrix(0, 3)), EmptyInputError);
}

}
