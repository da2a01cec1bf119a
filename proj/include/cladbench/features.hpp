#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cladbench/data.hpp"
#include "cladbench/linalg.hpp"

namespace clad {

/// P / (v * pi * r^2) in J/mm^3 for power in W, velocity in mm/s, radius in mm.
double volumetric_energy_density(double power, double velocity, double radius);

/// Powder mass per unit travel, g/mm, for feed rate in g/s and velocity in mm/s.
double linear_mass_density(double feed_rate, double velocity);

enum class FeatureSet { MachineOnly, Full };

std::string_view featureset_name(FeatureSet kind);
FeatureSet parse_featureset(std::string_view name);

// Number of model-visible columns.
std::size_t feature_count(FeatureSet kind);
std::vector<std::string> feature_names(FeatureSet kind);

struct FeatureVector {
  double power = 0.0;
  double velocity = 0.0;
  double energy_density = 0.0;
  double mass_density = 0.0;

  // Model-visible projection; MACHINE_ONLY masks the two derived values.
  std::vector<double> visible(FeatureSet kind) const;
};

FeatureVector featurize(const CladRecord& record);
FeatureVector featurize(double power, double velocity, double feed_rate, double beam_radius);

// One row per record, columns in feature_names(kind) order.
Matrix feature_matrix(const Dataset& dataset, FeatureSet kind);
Matrix feature_matrix(const Dataset& dataset, FeatureSet kind, std::span<const std::size_t> rows);

/// Per-column extrema of a training matrix.
struct NormalizationParams {
  Vector min;
  Vector max;

  std::size_t dims() const { return static_cast<std::size_t>(min.size()); }
  bool operator==(const NormalizationParams& other) const {
    return min.size() == other.min.size() && min == other.min && max == other.max;
  }
};

NormalizationParams fit_normalizer(const Matrix& training);

// (x - min) / (max - min); constant columns map to 0; no clipping.
Matrix normalize(const NormalizationParams& params, const Matrix& x);
Matrix denormalize(const NormalizationParams& params, const Matrix& x);

}  // namespace clad
