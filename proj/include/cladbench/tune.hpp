#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cladbench/data.hpp"
#include "cladbench/estimator.hpp"
#include "cladbench/estimator_spec.hpp"
#include "cladbench/eval.hpp"
#include "cladbench/features.hpp"
#include "cladbench/rng.hpp"

namespace clad {

struct UniformReal {
  double lo = 0.0;
  double hi = 1.0;
};
struct LogUniformReal {
  double lo = 1e-3;
  double hi = 1.0;
};
// Closed range; lo == hi is allowed.
struct UniformInt {
  std::int64_t lo = 0;
  std::int64_t hi = 1;
};
struct Categorical {
  std::vector<HyperValue> options;
};

using ParamDistribution = std::variant<UniformReal, LogUniformReal, UniformInt, Categorical>;

// Throws SpecError when the distribution is malformed.
void validate_distribution(const ParamDistribution& dist);
HyperValue sample_value(const ParamDistribution& dist, Rng& rng);
bool in_support(const ParamDistribution& dist, const HyperValue& value);
Json distribution_to_json(const ParamDistribution& dist);

struct SearchSpace {
  EstimatorKind kind = EstimatorKind::Ols;
  Task task = Task::Regression;
  std::map<std::string, ParamDistribution> params;
  // Applied to every candidate before the sampled values.
  Hyperparameters fixed;
};

SearchSpace default_search_space(EstimatorKind kind, Task task);
// Accepts excluded names so they raise UnsupportedKindError.
SearchSpace default_search_space(std::string_view kind, Task task);

// Values chosen in the reference benchmark (documentation defaults).
Hyperparameters reference_hyperparameters(EstimatorKind kind);

// Parameters are drawn in name order.
EstimatorSpec sample_candidate(const SearchSpace& space, Rng& rng);

enum class Objective { ValMseMin, ValAccMax };

struct Trial {
  EstimatorSpec spec;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
  std::optional<std::string> error;
};

struct SearchResult {
  std::vector<Trial> trials;
  std::size_t best = 0;
  Objective objective = Objective::ValMseMin;
  std::uint64_t seed = 0;
  std::size_t k = 0;

  const Trial& best_trial() const { return trials.at(best); }
};

inline constexpr std::size_t kDefaultSearchIterations = 60;

// Fold indices are drawn once from `seed` and shared by every trial.
SearchResult random_search(const SearchSpace& space, const Matrix& raw_x, const Vector& y,
                           std::size_t k, std::size_t n_iter, std::uint64_t seed,
                           unsigned threads = 1);
SearchResult random_search(const SearchSpace& space, const Dataset& dataset, FeatureSet featureset,
                           Target target, std::size_t k, std::size_t n_iter, std::uint64_t seed,
                           unsigned threads = 1);

Json search_to_json(const SearchResult& result);

}  // namespace clad
