#include "cladbench/procmap.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cladbench/digest.hpp"
#include "cladbench/error.hpp"
#include "cladbench/parallel.hpp"

namespace clad {

double Axis::at(std::size_t i) const {
  if (i + 1 >= steps) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void GridSpec::validate() const {
  auto check = [](const Axis& a, const char* name) {
    if (a.steps < 2) throw ConfigError(std::string(name) + " axis needs at least 2 steps");
    if (!(std::isfinite(a.min) && std::isfinite(a.max) && a.min < a.max)) {
      throw ConfigError(std::string(name) + " axis needs min < max");
    }
    if (!(a.min > 0.0)) throw ConfigError(std::string(name) + " axis must be positive");
  };
  check(power, "power");
  check(velocity, "velocity");
  if (!(feed_rate > 0.0 && std::isfinite(feed_rate))) throw ConfigError("feed rate must be positive");
  if (!(beam_radius > 0.0 && std::isfinite(beam_radius))) throw ConfigError("beam radius must be positive");
}

namespace {

double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(what + ": '" + std::string(s) + "' is not a number");
  return v;
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Axis parse_axis(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
    throw ConfigError("axis '" + std::string(text) + "' must look like min:max:steps");
  }
  Axis axis;
  axis.min = parse_double(text.substr(0, a), "axis min");
  axis.max = parse_double(text.substr(a + 1, b - a - 1), "axis max");
  const double steps = parse_double(text.substr(b + 1), "axis steps");
  if (steps != std::floor(steps) || steps < 0 || steps > 1e6) throw ConfigError("axis steps must be a whole number");
  axis.steps = static_cast<std::size_t>(steps);
  return axis;
}

std::string_view map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::Width: return "width";
    case MapKind::Height: return "height";
    case MapKind::Depth: return "depth";
    case MapKind::QualityClass: return "quality_class";
    case MapKind::QualityProb: return "quality_prob";
  }
  return "?";
}

MapKind parse_map_kind(std::string_view name) {
  for (MapKind k : {MapKind::Width, MapKind::Height, MapKind::Depth, MapKind::QualityClass,
                    MapKind::QualityProb}) {
    if (map_kind_name(k) == name) return k;
  }
  throw ParseError("unknown map kind '" + std::string(name) + "'");
}

Matrix grid_inputs(const GridSpec& grid, FeatureSet featureset) {
  grid.validate();
  const std::size_t cols = feature_count(featureset);
  Matrix x(static_cast<Eigen::Index>(grid.velocity.steps * grid.power.steps), static_cast<Eigen::Index>(cols));
  Eigen::Index row = 0;
  for (std::size_t v = 0; v < grid.velocity.steps; ++v) {
    for (std::size_t p = 0; p < grid.power.steps; ++p, ++row) {
      const auto visible = featurize(grid.power.at(p), grid.velocity.at(v), grid.feed_rate, grid.beam_radius)
                               .visible(featureset);
      for (std::size_t c = 0; c < cols; ++c) x(row, static_cast<Eigen::Index>(c)) = visible[c];
    }
  }
  return x;
}

FeatureSet model_featureset(const TrainedModel& model) {
  if (model.meta().featureset) return *model.meta().featureset;
  const std::size_t d = model.meta().n_features;
  if (d == feature_count(FeatureSet::Full)) return FeatureSet::Full;
  if (d == feature_count(FeatureSet::MachineOnly)) return FeatureSet::MachineOnly;
  throw ShapeError("process map: model takes " + std::to_string(d) + " inputs, not a known feature set");
}

namespace {

// One predict() call per node, so every value equals a direct call on the
// same single-row input.
Matrix evaluate_nodes(const TrainedModel& model, const GridSpec& grid, bool probability, unsigned threads) {
  const Matrix x = grid_inputs(grid, model_featureset(model));
  Vector flat(x.rows());
  parallel_for(static_cast<std::size_t>(x.rows()), threads, [&](std::size_t i) {
    const Matrix row = x.row(static_cast<Eigen::Index>(i));
    flat(static_cast<Eigen::Index>(i)) = probability ? model.predict_proba(row)(0) : model.predict(row)(0);
  });
  Matrix values(static_cast<Eigen::Index>(grid.velocity.steps), static_cast<Eigen::Index>(grid.power.steps));
  for (Eigen::Index i = 0; i < flat.size(); ++i) values(i / values.cols(), i % values.cols()) = flat(i);
  return values;
}

}  // namespace

ProcessMap predict_geometry_map(const TrainedModel& model, const GridSpec& grid, unsigned threads) {
  if (model.task() != Task::Regression) throw TaskError("geometry map needs a regression model");
  ProcessMap map;
  map.grid = grid;
  map.kind = MapKind::Width;
  if (model.meta().target == Target::Height) map.kind = MapKind::Height;
  if (model.meta().target == Target::Depth) map.kind = MapKind::Depth;
  map.values = evaluate_nodes(model, grid, false, threads);
  map.model_digest = digest_hex(model_to_string(model));
  return map;
}

QualityMaps predict_quality_map(const TrainedModel& model, const GridSpec& grid, unsigned threads) {
  if (model.task() != Task::Classification) throw TaskError("quality map needs a classification model");
  QualityMaps maps;
  maps.probability.grid = grid;
  maps.probability.kind = MapKind::QualityProb;
  maps.probability.values = evaluate_nodes(model, grid, true, threads);
  maps.probability.model_digest = digest_hex(model_to_string(model));
  maps.label = maps.probability;
  maps.label.kind = MapKind::QualityClass;
  maps.label.values = (maps.probability.values.array() > 0.5).cast<double>().matrix();
  return maps;
}

MapFormat parse_map_format(std::string_view name) {
  if (name == "csv") return MapFormat::Csv;
  if (name == "json") return MapFormat::Json;
  if (name == "svg") return MapFormat::Svg;
  throw ConfigError("unknown map format '" + std::string(name) + "' (csv, json, svg)");
}

std::string_view map_format_extension(MapFormat format) {
  switch (format) {
    case MapFormat::Csv: return "csv";
    case MapFormat::Json: return "json";
    case MapFormat::Svg: return "svg";
  }
  return "";
}

namespace {

Json grid_to_json(const GridSpec& g) {
  auto axis = [](const Axis& a) { return Json{{"min", a.min}, {"max", a.max}, {"steps", a.steps}}; };
  return Json{{"power_w", axis(g.power)},
              {"velocity_mm_s", axis(g.velocity)},
              {"feed_rate_g_s", g.feed_rate},
              {"beam_radius_mm", g.beam_radius}};
}

GridSpec grid_from_json(const Json& j) {
  auto axis = [](const Json& a) {
    return Axis{a.at("min").get<double>(), a.at("max").get<double>(), a.at("steps").get<std::size_t>()};
  };
  GridSpec g;
  g.power = axis(j.at("power_w"));
  g.velocity = axis(j.at("velocity_mm_s"));
  g.feed_rate = j.at("feed_rate_g_s").get<double>();
  g.beam_radius = j.at("beam_radius_mm").get<double>();
  return g;
}

std::vector<std::string> metadata_lines(const ProcessMap& map, const ExportOptions& options) {
  std::vector<std::string> lines{
      "schema_version: 1",
      "kind: " + std::string(map_kind_name(map.kind)),
      "model_digest: " + map.model_digest,
      "feed_rate_g_s: " + num17(map.grid.feed_rate),
      "beam_radius_mm: " + num17(map.grid.beam_radius),
  };
  if (options.provenance.is_object()) {
    for (auto it = options.provenance.begin(); it != options.provenance.end(); ++it) {
      lines.push_back(it.key() + ": " + (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()));
    }
  }
  return lines;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string map_to_csv(const ProcessMap& map, const ExportOptions& options) {
  std::string out;
  for (const auto& line : metadata_lines(map, options)) out += "# " + line + "\n";
  out += "velocity_mm_s,power_w,value\n";
  for (std::size_t v = 0; v < map.grid.velocity.steps; ++v) {
    for (std::size_t p = 0; p < map.grid.power.steps; ++p) {
      out += num17(map.grid.velocity.at(v)) + "," + num17(map.grid.power.at(p)) + "," + num17(map.at(v, p)) + "\n";
    }
  }
  return out;
}

std::string map_to_json(const ProcessMap& map, const ExportOptions& options) {
  Json values = Json::array();
  for (Eigen::Index r = 0; r < map.values.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < map.values.cols(); ++c) row.push_back(map.values(r, c));
    values.push_back(std::move(row));
  }
  Json j{{"schema_version", 1},
         {"kind", std::string(map_kind_name(map.kind))},
         {"layout", "row-major, rows = velocity, columns = power"},
         {"grid", grid_to_json(map.grid)},
         {"model_digest", map.model_digest},
         {"values", std::move(values)}};
  if (!options.provenance.is_null()) j["provenance"] = options.provenance;
  return j.dump(1) + "\n";
}

std::string map_to_svg(const ProcessMap& map, const ExportOptions& options) {
  const GridSpec& g = map.grid;
  const bool discrete = map.kind == MapKind::QualityClass || map.kind == MapKind::QualityProb;
  double lo = discrete ? 0.0 : map.values.minCoeff();
  double hi = discrete ? 1.0 : map.values.maxCoeff();
  const double dp = (g.power.max - g.power.min) / static_cast<double>(g.power.steps - 1);
  const double dv = (g.velocity.max - g.velocity.min) / static_cast<double>(g.velocity.steps - 1);
  // Velocity grows upward: y = v_max - v.
  auto color = [&](double value) {
    const double t = hi > lo ? std::clamp((value - lo) / (hi - lo), 0.0, 1.0) : 0.0;
    char buf[24];
    std::snprintf(buf, sizeof buf, "rgb(%d,0,%d)", static_cast<int>(std::lround(255.0 * t)),
                  static_cast<int>(std::lround(255.0 * (1.0 - t))));
    return std::string(buf);
  };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!--\n";
  for (const auto& line : metadata_lines(map, options)) out += "  " + line + "\n";
  out += "  grid power_w: " + num17(g.power.min) + ":" + num17(g.power.max) + ":" + std::to_string(g.power.steps) + "\n";
  out += "  grid velocity_mm_s: " + num17(g.velocity.min) + ":" + num17(g.velocity.max) + ":" +
         std::to_string(g.velocity.steps) + "\n";
  out += "  x = power_w, y = velocity_mm_max - velocity_mm_s\n";
  out += "  color: linear rgb(0,0,255) at " + num17(lo) + " to rgb(255,0,0) at " + num17(hi) + "\n";
  out += "-->\n";
  char box[160];
  std::snprintf(box, sizeof box, "%s %s %s %s", num17(g.power.min - dp / 2).c_str(), num17(-dv / 2).c_str(),
                num17(g.power.max - g.power.min + dp).c_str(), num17(g.velocity.max - g.velocity.min + dv).c_str());
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\"" +
         std::string(box) + "\" preserveAspectRatio=\"none\">\n";
  for (std::size_t v = 0; v < g.velocity.steps; ++v) {
    for (std::size_t p = 0; p < g.power.steps; ++p) {
      out += "<rect x=\"" + num17(g.power.at(p) - dp / 2) + "\" y=\"" + num17(g.velocity.max - g.velocity.at(v) - dv / 2) +
             "\" width=\"" + num17(dp) + "\" height=\"" + num17(dv) + "\" fill=\"" + color(map.at(v, p)) + "\"/>\n";
    }
  }
  const double radius = 0.3 * std::min(dp, dv);
  for (const auto& s : options.scatter) {
    out += "<circle cx=\"" + num17(s.power) + "\" cy=\"" + num17(g.velocity.max - s.velocity) + "\" r=\"" +
           num17(radius) + "\" fill=\"" + color(s.value) + "\" stroke=\"black\" stroke-width=\"" +
           num17(radius / 4) + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void export_map(const ProcessMap& map, MapFormat format, const std::string& path, const ExportOptions& options) {
  switch (format) {
    case MapFormat::Csv: write_file(path, map_to_csv(map, options)); break;
    case MapFormat::Json: write_file(path, map_to_json(map, options)); break;
    case MapFormat::Svg: write_file(path, map_to_svg(map, options)); break;
  }
}

ProcessMap map_from_csv(std::istream& in) {
  ProcessMap map;
  std::map<std::string, std::string> meta;
  std::string line;
  bool header = false;
  std::vector<std::array<double, 3>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (!line.empty() && line[0] == '#') {
        const auto colon = line.find(':');
        if (colon != std::string::npos) {
          auto key = line.substr(1, colon - 1);
          key.erase(0, key.find_first_not_of(' '));
          meta[key] = line.substr(line.find_first_not_of(' ', colon + 1));
        }
        continue;
      }
      if (line != "velocity_mm_s,power_w,value") throw ParseError("process map CSV: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    if (line.empty()) continue;
    std::array<double, 3> r{};
    std::size_t start = 0;
    for (int f = 0; f < 3; ++f) {
      const auto end = f < 2 ? line.find(',', start) : line.size();
      if (end == std::string::npos) throw ParseError("process map CSV line " + std::to_string(line_no) + ": too few fields");
      try {
        r[f] = parse_double(std::string_view(line).substr(start, end - start), "value");
      } catch (const ConfigError&) {
        throw ParseError("process map CSV line " + std::to_string(line_no) + ": bad number");
      }
      start = end + 1;
    }
    if (start < line.size()) throw ParseError("process map CSV line " + std::to_string(line_no) + ": too many fields");
    rows.push_back(r);
  }
  if (!header) throw ParseError("process map CSV: missing header");
  std::vector<double> powers;
  std::vector<double> velocities;
  for (const auto& r : rows) {
    if (velocities.empty() || velocities.back() != r[0]) velocities.push_back(r[0]);
    if (velocities.size() == 1) powers.push_back(r[1]);
  }
  if (powers.size() < 2 || velocities.size() < 2 || rows.size() != powers.size() * velocities.size()) {
    throw ParseError("process map CSV: rows do not form a full grid");
  }
  map.grid.power = {powers.front(), powers.back(), powers.size()};
  map.grid.velocity = {velocities.front(), velocities.back(), velocities.size()};
  if (meta.count("feed_rate_g_s")) map.grid.feed_rate = std::stod(meta["feed_rate_g_s"]);
  if (meta.count("beam_radius_mm")) map.grid.beam_radius = std::stod(meta["beam_radius_mm"]);
  if (meta.count("kind")) map.kind = parse_map_kind(meta["kind"]);
  if (meta.count("model_digest")) map.model_digest = meta["model_digest"];
  map.values.resize(static_cast<Eigen::Index>(velocities.size()), static_cast<Eigen::Index>(powers.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t v = i / powers.size();
    const std::size_t p = i % powers.size();
    if (rows[i][0] != velocities[v] || rows[i][1] != powers[p]) {
      throw ParseError("process map CSV: rows are not in row-major grid order");
    }
    map.values(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(p)) = rows[i][2];
  }
  return map;
}

ProcessMap map_from_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    ProcessMap map;
    map.kind = parse_map_kind(j.at("kind").get<std::string>());
    map.grid = grid_from_json(j.at("grid"));
    map.model_digest = j.value("model_digest", std::string());
    const Json& values = j.at("values");
    if (values.size() != map.grid.velocity.steps) throw ParseError("process map JSON: row count mismatch");
    map.values.resize(static_cast<Eigen::Index>(map.grid.velocity.steps), static_cast<Eigen::Index>(map.grid.power.steps));
    for (std::size_t r = 0; r < values.size(); ++r) {
      if (values[r].size() != map.grid.power.steps) throw ParseError("process map JSON: column count mismatch");
      for (std::size_t c = 0; c < values[r].size(); ++c) {
        map.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r][c].get<double>();
      }
    }
    return map;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("process map JSON: ") + e.what());
  }
}

ProcessMap import_map(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return map_from_json(text);
  std::istringstream in(text);
  return map_from_csv(in);
}

}  // namespace clad
