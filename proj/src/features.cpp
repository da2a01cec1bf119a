#include "cladbench/features.hpp"

#include <cmath>
#include <numbers>

#include "cladbench/error.hpp"

namespace clad {

double volumetric_energy_density(double power, double velocity, double radius) {
  if (!(velocity > 0.0)) throw DomainError("energy density needs velocity > 0");
  if (!(radius > 0.0)) throw DomainError("energy density needs beam radius > 0");
  if (!(power >= 0.0)) throw DomainError("energy density needs power >= 0");
  return power / (velocity * (std::numbers::pi * radius * radius));
}

double linear_mass_density(double feed_rate, double velocity) {
  if (!(velocity > 0.0)) throw DomainError("mass density needs velocity > 0");
  if (!(feed_rate >= 0.0)) throw DomainError("mass density needs feed rate >= 0");
  return feed_rate / velocity;
}

std::string_view featureset_name(FeatureSet kind) {
  return kind == FeatureSet::Full ? "full" : "machine";
}

FeatureSet parse_featureset(std::string_view name) {
  if (name == "full") return FeatureSet::Full;
  if (name == "machine") return FeatureSet::MachineOnly;
  throw ConfigError("unknown feature set '" + std::string(name) + "' (expected machine|full)");
}

std::size_t feature_count(FeatureSet kind) { return kind == FeatureSet::Full ? 4 : 2; }

std::vector<std::string> feature_names(FeatureSet kind) {
  if (kind == FeatureSet::MachineOnly) return {"power_w", "velocity_mm_s"};
  return {"power_w", "velocity_mm_s", "energy_density_j_mm3", "mass_density_g_mm"};
}

std::vector<double> FeatureVector::visible(FeatureSet kind) const {
  if (kind == FeatureSet::MachineOnly) return {power, velocity};
  return {power, velocity, energy_density, mass_density};
}

FeatureVector featurize(double power, double velocity, double feed_rate, double beam_radius) {
  FeatureVector fv;
  fv.power = power;
  fv.velocity = velocity;
  fv.energy_density = volumetric_energy_density(power, velocity, beam_radius);
  fv.mass_density = linear_mass_density(feed_rate, velocity);
  return fv;
}

FeatureVector featurize(const CladRecord& record) {
  return featurize(record.power, record.velocity, record.feed_rate, record.beam_radius);
}

Matrix feature_matrix(const Dataset& dataset, FeatureSet kind,
                      std::span<const std::size_t> rows) {
  const auto cols = static_cast<Eigen::Index>(feature_count(kind));
  Matrix out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto values = featurize(dataset.records.at(rows[i])).visible(kind);
    for (Eigen::Index c = 0; c < cols; ++c) out(static_cast<Eigen::Index>(i), c) = values[c];
  }
  return out;
}

Matrix feature_matrix(const Dataset& dataset, FeatureSet kind) {
  std::vector<std::size_t> rows(dataset.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return feature_matrix(dataset, kind, rows);
}

NormalizationParams fit_normalizer(const Matrix& training) {
  if (training.rows() == 0) throw EmptyInputError("cannot fit a normalizer on zero rows");
  NormalizationParams p;
  p.min = training.colwise().minCoeff().transpose();
  p.max = training.colwise().maxCoeff().transpose();
  return p;
}

Matrix normalize(const NormalizationParams& params, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != params.dims()) {
    throw ShapeError("normalize: expected " + std::to_string(params.dims()) + " columns, got " +
                     std::to_string(x.cols()));
  }
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double lo = params.min(c);
    const double span = params.max(c) - lo;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      out(r, c) = span > 0.0 ? (x(r, c) - lo) / span : 0.0;
    }
  }
  return out;
}

Matrix denormalize(const NormalizationParams& params, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != params.dims()) {
    throw ShapeError("denormalize: expected " + std::to_string(params.dims()) +
                     " columns, got " + std::to_string(x.cols()));
  }
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double lo = params.min(c);
    const double span = params.max(c) - lo;
    for (Eigen::Index r = 0; r < x.rows(); ++r) out(r, c) = lo + x(r, c) * span;
  }
  return out;
}

}  // namespace clad
