#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cladbench/estimator.hpp"
#include "cladbench/features.hpp"
#include "cladbench/models.hpp"

namespace clad {

struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 2;

  // Node i of the evenly spaced axis; the last node is exactly max.
  double at(std::size_t i) const;
  bool operator==(const Axis&) const = default;
};

struct GridSpec {
  Axis power;     // W, map columns
  Axis velocity;  // mm/s, map rows
  double feed_rate = 0.2;
  double beam_radius = 1.5;

  void validate() const;  // throws ConfigError
  bool operator==(const GridSpec&) const = default;
};

// "p0:p1:np" -> Axis
Axis parse_axis(std::string_view text);

enum class MapKind { Width, Height, Depth, QualityClass, QualityProb };
std::string_view map_kind_name(MapKind kind);
MapKind parse_map_kind(std::string_view name);

struct ProcessMap {
  GridSpec grid;
  MapKind kind = MapKind::Width;
  Matrix values;  // velocity.steps x power.steps
  std::string model_digest;

  double at(std::size_t velocity_index, std::size_t power_index) const {
    return values(static_cast<Eigen::Index>(velocity_index), static_cast<Eigen::Index>(power_index));
  }
};

// Raw model inputs for every node, row-major (v0p0, v0p1, ..., v1p0, ...).
Matrix grid_inputs(const GridSpec& grid, FeatureSet featureset);
// Feature set recorded at fit time, else inferred from the input width.
FeatureSet model_featureset(const TrainedModel& model);

ProcessMap predict_geometry_map(const TrainedModel& model, const GridSpec& grid, unsigned threads = 1);

struct QualityMaps {
  ProcessMap label;
  ProcessMap probability;
};
QualityMaps predict_quality_map(const TrainedModel& model, const GridSpec& grid, unsigned threads = 1);

struct ScatterPoint {
  double power = 0.0;
  double velocity = 0.0;
  double value = 0.0;
};

enum class MapFormat { Csv, Json, Svg };
MapFormat parse_map_format(std::string_view name);
std::string_view map_format_extension(MapFormat format);

struct ExportOptions {
  Json provenance;  // seed, config digest; written into every format
  std::vector<ScatterPoint> scatter;  // SVG only
};

std::string map_to_csv(const ProcessMap& map, const ExportOptions& options = {});
std::string map_to_json(const ProcessMap& map, const ExportOptions& options = {});
std::string map_to_svg(const ProcessMap& map, const ExportOptions& options = {});
void export_map(const ProcessMap& map, MapFormat format, const std::string& path,
                const ExportOptions& options = {});

// Axes are rebuilt from the node coordinates; feed, radius and kind from the
// comment block when present.
ProcessMap map_from_csv(std::istream& in);
ProcessMap map_from_json(const std::string& text);
ProcessMap import_map(const std::string& path);

}  // namespace clad
