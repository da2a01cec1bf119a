#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace clad {

enum class Source { Experiment, Cfd, Synthetic };

std::string_view source_name(Source source);
Source parse_source(std::string_view name);

/// One single-track observation: process inputs and measured geometry.
/// Power in W, velocity in mm/s, feed rate in g/s, beam radius in mm and
/// all geometry in micrometres.
struct CladRecord {
  std::string id;
  Source source = Source::Synthetic;
  double power = 0.0;
  double velocity = 0.0;
  double feed_rate = 0.0;
  double beam_radius = 0.0;
  double width = 0.0;
  double height = 0.0;
  double depth = 0.0;

  bool operator==(const CladRecord&) const = default;
};

// Throws ValidationError naming the offending field, or
// DegenerateRecordError when height and depth are both zero.
void validate_record(const CladRecord& record);

enum class Quality : int { Desirable = 0, Undesirable = 1 };

struct QualityLabel {
  Quality value = Quality::Undesirable;
  double dilution = 0.0;

  bool operator==(const QualityLabel&) const = default;
};

inline constexpr double kDilutionLow = 0.20;
inline constexpr double kDilutionHigh = 0.50;

/// depth / (depth + height). Throws DegenerateRecordError when the sum is 0.
double compute_dilution(double depth, double height);

/// Desirable iff the dilution lies in [0.20, 0.50], both ends inclusive.
QualityLabel label_quality(const CladRecord& record);

struct Dataset {
  static constexpr int kSchemaVersion = 1;

  std::vector<CladRecord> records;
  std::vector<QualityLabel> labels;
  int schema_version = kSchemaVersion;

  // Validates every record, checks id uniqueness and computes the labels.
  static Dataset from_records(std::vector<CladRecord> records);

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

enum class Target { Width, Height, Depth, Quality };

std::string_view target_name(Target target);
Target parse_target(std::string_view name);
bool is_classification_target(Target target);

// Regression targets in micrometres, or the 0/1 quality label.
std::vector<double> target_values(const Dataset& dataset, Target target);

struct Range {
  double min = 0.0;
  double max = 0.0;
};

/// Parameters of the synthetic stand-in for the experiment + CFD data.
struct SurrogateConfig {
  Range power_range{100.0, 500.0};
  Range velocity_range{2.0, 20.0};
  Range feed_range{0.05, 0.5};
  double beam_radius = 1.5;
  std::size_t n_experiment = 90;
  std::size_t n_cfd = 235;
  double noise_sd = 0.05;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

struct Geometry {
  double width = 0.0;
  double height = 0.0;
  double depth = 0.0;
};

/// Noise-free surrogate surfaces. `energy_density` in J/mm^3,
/// `mass_density` and `max_mass_density` in g/mm.
Geometry surrogate_geometry(double energy_density, double mass_density,
                            double max_mass_density);

/// Deterministic in `config`. Experiment-tagged records come first, then
/// CFD-tagged ones, which carry half the configured noise. Numeric fields
/// are rounded to the CSV precision so the dataset survives a save/load
/// round-trip unchanged.
Dataset synthesize_dataset(const SurrogateConfig& config);

// CSV persistence. Lines starting with '#' before the header are comments.
Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(const Dataset& dataset, std::ostream& out,
                       const std::vector<std::string>& comments = {});
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& dataset, const std::string& path,
                  const std::vector<std::string>& comments = {});

// Shortest-form helpers used by every text serializer in the project.
std::string format_sig(double value, int significant_digits);
double round_sig(double value, int significant_digits);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> folds;
};

// Test size is round-half-up of n * test_fraction.
SplitIndices train_test_split(std::size_t n, double test_fraction, std::uint64_t seed);
SplitIndices train_test_split(const Dataset& dataset, double test_fraction,
                              std::uint64_t seed);

// The first n % k folds hold one extra index.
SplitIndices k_fold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

// Complement of fold `fold` within a k-fold split, ascending.
std::vector<std::size_t> fold_training_indices(const SplitIndices& split, std::size_t fold);

struct FieldSummary {
  static constexpr std::size_t kBins = 20;

  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::array<double, kBins + 1> bin_edges{};
  std::array<std::size_t, kBins> counts{};
};

struct DistributionSummary {
  FieldSummary width;
  FieldSummary height;
  FieldSummary depth;
  std::size_t desirable = 0;
  std::size_t undesirable = 0;
};

FieldSummary summarize_field(const std::vector<double>& values);
DistributionSummary summarize_distribution(const Dataset& dataset);

}  // namespace clad
