#pragma once

#include <map>
#include <memory>
#include <string>

#include "cladbench/estimator_spec.hpp"
#include "cladbench/linalg.hpp"
#include "json.hpp"

namespace clad {

using Json = nlohmann::json;

// Free-form annotations an estimator records about its own fit.
using FitNotes = std::map<std::string, std::string>;

/// Fitted learned state behind a TrainedModel. Inputs are already in the
/// model's (normalized) feature space.
class Estimator {
 public:
  virtual ~Estimator() = default;

  // Regression prediction, or probability of class 1 for classifiers.
  virtual Vector predict(const Matrix& x) const = 0;

  virtual Json parameters() const = 0;
};

// Dense array helpers shared by all estimators' serializers.
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

}  // namespace clad
