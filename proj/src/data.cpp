#include "cladbench/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "cladbench/error.hpp"
#include "cladbench/features.hpp"
#include "cladbench/rng.hpp"

namespace clad {

namespace {

constexpr int kCsvDigits = 9;
constexpr const char* kCsvHeader =
    "id,source,power_w,velocity_mm_s,feed_rate_g_s,beam_radius_mm,width_um,height_um,"
    "depth_um,dilution,label";

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::size_t row, std::string_view column) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("row " + std::to_string(row) + ": cannot parse " + std::string(column) +
                     " value '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view source_name(Source source) {
  switch (source) {
    case Source::Experiment: return "EXPERIMENT";
    case Source::Cfd: return "CFD";
    case Source::Synthetic: return "SYNTHETIC";
  }
  return "SYNTHETIC";
}

Source parse_source(std::string_view name) {
  if (name == "EXPERIMENT") return Source::Experiment;
  if (name == "CFD") return Source::Cfd;
  if (name == "SYNTHETIC") return Source::Synthetic;
  throw ParseError("unknown source '" + std::string(name) + "'");
}

void validate_record(const CladRecord& r) {
  auto require = [&](bool ok, const char* field, const char* rule) {
    if (!ok) throw ValidationError("record '" + r.id + "': field " + field + " must be " + rule);
  };
  require(!r.id.empty(), "id", "non-empty");
  require(std::isfinite(r.power) && r.power > 0.0, "power", "> 0");
  require(std::isfinite(r.velocity) && r.velocity > 0.0, "velocity", "> 0");
  require(std::isfinite(r.beam_radius) && r.beam_radius > 0.0, "beam_radius", "> 0");
  require(std::isfinite(r.feed_rate) && r.feed_rate >= 0.0, "feed_rate", ">= 0");
  require(std::isfinite(r.width) && r.width >= 0.0, "width", ">= 0");
  require(std::isfinite(r.height) && r.height >= 0.0, "height", ">= 0");
  require(std::isfinite(r.depth) && r.depth >= 0.0, "depth", ">= 0");
  if (r.height == 0.0 && r.depth == 0.0) {
    throw DegenerateRecordError("record '" + r.id + "': height and depth are both zero");
  }
}

double compute_dilution(double depth, double height) {
  if (!(depth >= 0.0) || !(height >= 0.0)) {
    throw DomainError("dilution requires non-negative depth and height");
  }
  if (depth + height == 0.0) {
    throw DegenerateRecordError("dilution undefined: depth + height = 0");
  }
  return depth / (depth + height);
}

QualityLabel label_quality(const CladRecord& record) {
  QualityLabel label;
  label.dilution = compute_dilution(record.depth, record.height);
  label.value = (label.dilution >= kDilutionLow && label.dilution <= kDilutionHigh)
                    ? Quality::Desirable
                    : Quality::Undesirable;
  return label;
}

Dataset Dataset::from_records(std::vector<CladRecord> records) {
  Dataset ds;
  ds.labels.reserve(records.size());
  std::unordered_set<std::string> ids;
  for (const auto& r : records) {
    validate_record(r);
    if (!ids.insert(r.id).second) throw ValidationError("duplicate record id '" + r.id + "'");
    ds.labels.push_back(label_quality(r));
  }
  ds.records = std::move(records);
  return ds;
}

std::string_view target_name(Target target) {
  switch (target) {
    case Target::Width: return "width";
    case Target::Height: return "height";
    case Target::Depth: return "depth";
    case Target::Quality: return "quality";
  }
  return "width";
}

Target parse_target(std::string_view name) {
  if (name == "width") return Target::Width;
  if (name == "height") return Target::Height;
  if (name == "depth") return Target::Depth;
  if (name == "quality") return Target::Quality;
  throw ConfigError("unknown target '" + std::string(name) + "'");
}

bool is_classification_target(Target target) { return target == Target::Quality; }

std::vector<double> target_values(const Dataset& dataset, Target target) {
  std::vector<double> out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& r = dataset.records[i];
    switch (target) {
      case Target::Width: out.push_back(r.width); break;
      case Target::Height: out.push_back(r.height); break;
      case Target::Depth: out.push_back(r.depth); break;
      case Target::Quality:
        out.push_back(static_cast<double>(static_cast<int>(dataset.labels[i].value)));
        break;
    }
  }
  return out;
}

void SurrogateConfig::validate() const {
  auto check_range = [](const Range& r, const char* name) {
    if (!(r.min > 0.0) || !(r.min < r.max) || !std::isfinite(r.max)) {
      throw ConfigError(std::string(name) + " range must satisfy 0 < min < max");
    }
  };
  check_range(power_range, "power");
  check_range(velocity_range, "velocity");
  check_range(feed_range, "feed");
  if (!(beam_radius > 0.0) || !std::isfinite(beam_radius)) {
    throw ConfigError("beam radius must be positive");
  }
  if (n_experiment + n_cfd == 0) throw ConfigError("n_experiment + n_cfd must be positive");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw ConfigError("noise_sd must be non-negative");
  }
}

Geometry surrogate_geometry(double energy_density, double mass_density, double max_mass_density) {
  Geometry g;
  const double mass_ratio = max_mass_density > 0.0 ? mass_density / max_mass_density : 0.0;
  g.width = 180.0 * std::pow(energy_density, 0.45) * (1.0 + 0.1 * mass_ratio);
  g.height = 900.0 * std::pow(mass_density, 0.8);
  g.depth = 14.0 * std::pow(energy_density, 0.9);
  return g;
}

Dataset synthesize_dataset(const SurrogateConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const double max_mass_density = config.feed_range.max / config.velocity_range.min;

  std::vector<CladRecord> records;
  records.reserve(config.n_experiment + config.n_cfd);
  auto make = [&](Source source, std::size_t ordinal) {
    CladRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "%s-%04zu", source == Source::Cfd ? "CFD" : "EXP", ordinal + 1);
    r.id = id;
    r.source = source;
    r.power = round_sig(rng.uniform(config.power_range.min, config.power_range.max), kCsvDigits);
    r.velocity =
        round_sig(rng.uniform(config.velocity_range.min, config.velocity_range.max), kCsvDigits);
    r.feed_rate = round_sig(rng.uniform(config.feed_range.min, config.feed_range.max), kCsvDigits);
    r.beam_radius = round_sig(config.beam_radius, kCsvDigits);

    const double energy = volumetric_energy_density(r.power, r.velocity, r.beam_radius);
    const double mass = linear_mass_density(r.feed_rate, r.velocity);
    const Geometry clean = surrogate_geometry(energy, mass, max_mass_density);
    const double sd = source == Source::Cfd ? 0.5 * config.noise_sd : config.noise_sd;
    do {
      r.width = round_sig(std::max(0.0, clean.width * (1.0 + sd * rng.normal())), kCsvDigits);
      r.height = round_sig(std::max(0.0, clean.height * (1.0 + sd * rng.normal())), kCsvDigits);
      r.depth = round_sig(std::max(0.0, clean.depth * (1.0 + sd * rng.normal())), kCsvDigits);
    } while (r.height == 0.0 && r.depth == 0.0);
    return r;
  };
  for (std::size_t i = 0; i < config.n_experiment; ++i) records.push_back(make(Source::Experiment, i));
  for (std::size_t i = 0; i < config.n_cfd; ++i) records.push_back(make(Source::Cfd, i));
  return Dataset::from_records(std::move(records));
}

std::string format_sig(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

double round_sig(double value, int significant_digits) {
  return std::strtod(format_sig(value, significant_digits).c_str(), nullptr);
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (view != kCsvHeader) {
      throw ParseError("line " + std::to_string(line_no) + ": unexpected header '" +
                       std::string(view) + "'");
    }
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError("missing CSV header");

  std::vector<CladRecord> records;
  std::vector<int> stored_labels;
  std::vector<double> stored_dilution;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    ++row;
    auto cells = split_commas(view);
    if (cells.size() != 11) {
      throw ParseError("row " + std::to_string(row) + " (line " + std::to_string(line_no) +
                       "): expected 11 fields, found " + std::to_string(cells.size()));
    }
    CladRecord r;
    r.id = std::string(trim(cells[0]));
    try {
      r.source = parse_source(trim(cells[1]));
    } catch (const ParseError&) {
      throw ParseError("row " + std::to_string(row) + ": unknown source '" +
                       std::string(trim(cells[1])) + "'");
    }
    r.power = parse_number(cells[2], row, "power_w");
    r.velocity = parse_number(cells[3], row, "velocity_mm_s");
    r.feed_rate = parse_number(cells[4], row, "feed_rate_g_s");
    r.beam_radius = parse_number(cells[5], row, "beam_radius_mm");
    r.width = parse_number(cells[6], row, "width_um");
    r.height = parse_number(cells[7], row, "height_um");
    r.depth = parse_number(cells[8], row, "depth_um");
    stored_dilution.push_back(parse_number(cells[9], row, "dilution"));
    std::string_view label = trim(cells[10]);
    if (label != "0" && label != "1") {
      throw ParseError("row " + std::to_string(row) + ": label must be 0 or 1");
    }
    stored_labels.push_back(label == "1" ? 1 : 0);
    try {
      validate_record(r);
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(row) + ": " + e.what());
    } catch (const DegenerateRecordError& e) {
      throw DegenerateRecordError("row " + std::to_string(row) + ": " + e.what());
    }
    records.push_back(std::move(r));
  }

  Dataset ds = Dataset::from_records(std::move(records));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& label = ds.labels[i];
    if (static_cast<int>(label.value) != stored_labels[i]) {
      throw IntegrityError("row " + std::to_string(i + 1) + ": stored label " +
                           std::to_string(stored_labels[i]) + " disagrees with dilution " +
                           format_sig(label.dilution, 9));
    }
    if (std::abs(stored_dilution[i] - label.dilution) > 1e-8 * std::max(1.0, label.dilution)) {
      throw IntegrityError("row " + std::to_string(i + 1) + ": stored dilution disagrees with depth/height");
    }
  }
  return ds;
}

void write_dataset_csv(const Dataset& dataset, std::ostream& out,
                       const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << kCsvHeader << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& r = dataset.records[i];
    out << r.id << ',' << source_name(r.source) << ',' << format_sig(r.power, kCsvDigits) << ','
        << format_sig(r.velocity, kCsvDigits) << ',' << format_sig(r.feed_rate, kCsvDigits) << ','
        << format_sig(r.beam_radius, kCsvDigits) << ',' << format_sig(r.width, kCsvDigits) << ','
        << format_sig(r.height, kCsvDigits) << ',' << format_sig(r.depth, kCsvDigits) << ','
        << format_sig(dataset.labels[i].dilution, kCsvDigits) << ','
        << static_cast<int>(dataset.labels[i].value) << '\n';
  }
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  return read_dataset_csv(in);
}

void save_dataset(const Dataset& dataset, const std::string& path,
                  const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset '" + path + "'");
  write_dataset_csv(dataset, out, comments);
  if (!out) throw IoError("write failed for '" + path + "'");
}

SplitIndices train_test_split(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw SplitError("test fraction must lie in (0, 1)");
  }
  if (n < 2) throw SplitError("need at least 2 rows to split, got " + std::to_string(n));
  const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction + 0.5));
  if (n_test == 0 || n_test == n) {
    throw SplitError("test fraction leaves an empty train or test side");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));

  SplitIndices split;
  split.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

SplitIndices train_test_split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  return train_test_split(dataset.size(), test_fraction, seed);
}

SplitIndices k_fold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw SplitError("k-fold needs 2 <= k <= n (k=" + std::to_string(k) +
                     ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));

  SplitIndices split;
  split.folds.resize(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    split.folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                          perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(split.folds[f].begin(), split.folds[f].end());
    pos += size;
  }
  return split;
}

std::vector<std::size_t> fold_training_indices(const SplitIndices& split, std::size_t fold) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < split.folds.size(); ++f) {
    if (f == fold) continue;
    out.insert(out.end(), split.folds[f].begin(), split.folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FieldSummary summarize_field(const std::vector<double>& values) {
  if (values.empty()) throw EmptyInputError("cannot summarize an empty field");
  FieldSummary s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size()));

  const double width = (s.max - s.min) / static_cast<double>(FieldSummary::kBins);
  for (std::size_t b = 0; b <= FieldSummary::kBins; ++b) {
    s.bin_edges[b] = s.min + width * static_cast<double>(b);
  }
  s.bin_edges[FieldSummary::kBins] = s.max;
  for (double v : values) {
    std::size_t bin = 0;
    if (width > 0.0) {
      bin = static_cast<std::size_t>(std::floor((v - s.min) / width));
      bin = std::min(bin, FieldSummary::kBins - 1);
    }
    ++s.counts[bin];
  }
  return s;
}

DistributionSummary summarize_distribution(const Dataset& dataset) {
  if (dataset.empty()) throw EmptyInputError("cannot summarize an empty dataset");
  DistributionSummary out;
  out.width = summarize_field(target_values(dataset, Target::Width));
  out.height = summarize_field(target_values(dataset, Target::Height));
  out.depth = summarize_field(target_values(dataset, Target::Depth));
  for (const auto& label : dataset.labels) {
    (label.value == Quality::Desirable ? out.desirable : out.undesirable) += 1;
  }
  return out;
}

}  // namespace clad
