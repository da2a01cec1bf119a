#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace clad {

enum class EstimatorKind {
  Ols,
  Poly,
  Ridge,
  Lasso,
  KnnReg,
  KnnClf,
  DtReg,
  DtClf,
  RfReg,
  RfClf,
  Gbr,
  Gbc,
  AdaReg,
  AdaClf,
  MlpReg,
  MlpClf,
  LogReg,
  Gnb,
  Gpr,
};

enum class Task { Regression, Classification };

std::string_view kind_name(EstimatorKind kind);
// Throws UnsupportedKindError for svr/svc/gpc and SpecError for unknown names.
EstimatorKind parse_kind(std::string_view name);
Task task_of(EstimatorKind kind);
std::string_view task_name(Task task);
const std::vector<EstimatorKind>& all_kinds();
std::vector<EstimatorKind> kinds_for(Task task);
bool is_stochastic(EstimatorKind kind);

using HyperValue = std::variant<std::int64_t, double, std::string>;
using Hyperparameters = std::map<std::string, HyperValue>;

std::string hyper_to_string(const HyperValue& value);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Ols;
  Hyperparameters params;
  std::uint64_t seed = 0;

  EstimatorSpec() = default;
  EstimatorSpec(EstimatorKind k, Hyperparameters p = {}, std::uint64_t s = 0)
      : kind(k), params(std::move(p)), seed(s) {}

  // Typed access after resolve_spec(); throw SpecError on a type mismatch.
  double real(const std::string& name) const;
  std::int64_t integer(const std::string& name) const;
  const std::string& text(const std::string& name) const;

  bool operator==(const EstimatorSpec&) const = default;
};

enum class ParamType { Real, Integer, Categorical, Text };

struct ParamSchema {
  std::string name;
  ParamType type = ParamType::Real;
  HyperValue fallback;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;
  bool hi_open = false;
  std::vector<std::string> choices;
  // Integer parameters where -1 stands for "no limit" (max_depth).
  bool minus_one_unlimited = false;
};

const std::vector<ParamSchema>& param_schema(EstimatorKind kind);

/// Fills defaults, coerces numeric types and validates every value against
/// the kind's schema. Unknown names and out-of-range values raise SpecError.
EstimatorSpec resolve_spec(const EstimatorSpec& spec);

}  // namespace clad
