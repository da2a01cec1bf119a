#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cladbench/estimator.hpp"
#include "cladbench/rng.hpp"

namespace clad {

enum class Activation { Identity, Logistic, Tanh, Relu };
Activation parse_activation(const std::string& name);
std::string activation_name(Activation a);

// "128,64", "(128, 64)" or "" (no hidden layer).
std::vector<std::size_t> parse_hidden_layers(const std::string& text);

/// Fully connected network with one output unit: linear for regression,
/// logistic for binary classification.
struct MlpNetwork {
  std::vector<Eigen::MatrixXd> weights;  // fan_in x fan_out per layer
  std::vector<Eigen::VectorXd> biases;
  Activation activation = Activation::Relu;
  bool logistic_output = false;

  static MlpNetwork initialize(std::size_t inputs, const std::vector<std::size_t>& hidden,
                               Activation activation, bool logistic_output, Rng& rng);

  // Output-unit pre-activation per row.
  Vector logits(const Matrix& x) const;
  // Regression value or class-1 probability per row.
  Vector output(const Matrix& x) const;

  /// Mean loss (half squared error, or log-loss on the logits) plus
  /// (alpha / 2n) * sum of squared weights. Writes the gradient in
  /// flatten() order when `gradient` is non-null.
  double loss(const Matrix& x, const Vector& y, double alpha, Vector* gradient) const;

  std::size_t parameter_count() const;
  Vector flatten() const;
  void assign(const Vector& flat);
};

class MlpModel final : public Estimator {
 public:
  MlpModel(MlpNetwork net, double target_offset, double target_scale)
      : net_(std::move(net)), offset_(target_offset), scale_(target_scale) {}

  Vector predict(const Matrix& x) const override;
  Json parameters() const override;
  static std::unique_ptr<MlpModel> from_json(const Json& j);

  const MlpNetwork& network() const { return net_; }

 private:
  MlpNetwork net_;
  double offset_;
  double scale_;
};

std::unique_ptr<Estimator> fit_mlp_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes);

}  // namespace clad
