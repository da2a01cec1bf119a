#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "cladbench/linalg.hpp"

namespace clad {

/// Covariance function built from Constant, RBF, Matern (nu in {0.5, 1.5,
/// 2.5}) and White terms combined with + and *. Parses sklearn-style
/// expressions such as "1**2 * RBF(length_scale=1) + WhiteKernel(noise_level=1)".
class Kernel {
 public:
  enum class Type { Constant, Rbf, Matern, White, Sum, Product };

  static Kernel parse(std::string_view text);
  static Kernel constant(double value);
  static Kernel rbf(double length_scale);
  static Kernel matern(double length_scale, double nu);
  static Kernel white(double noise_level);
  friend Kernel operator+(Kernel a, Kernel b);
  friend Kernel operator*(Kernel a, Kernel b);

  // Cross-covariance k(a_i, b_j). White noise contributes only when
  // `same` marks a and b as the identical point set.
  Eigen::MatrixXd cross(const Matrix& a, const Matrix& b, bool same) const;
  // k(a_i, a_i), including white noise.
  Eigen::VectorXd diag(const Matrix& a) const;

  std::string to_string() const;
  Type type() const { return type_; }

 private:
  Kernel(Type type, double p1, double p2) : type_(type), p1_(p1), p2_(p2) {}
  double stationary(double sq_dist) const;

  Type type_ = Type::Constant;
  double p1_ = 1.0;  // constant value, length scale or noise level
  double p2_ = 0.0;  // Matern nu
  std::shared_ptr<const Kernel> left_;
  std::shared_ptr<const Kernel> right_;
};

}  // namespace clad
