#include "cladbench/estimators/kernel.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"

namespace clad {

Kernel Kernel::constant(double value) {
  if (!(value >= 0.0)) throw SpecError("kernel: constant value must be >= 0");
  return Kernel(Type::Constant, value, 0.0);
}

Kernel Kernel::rbf(double length_scale) {
  if (!(length_scale > 0.0)) throw SpecError("kernel: RBF length_scale must be > 0");
  return Kernel(Type::Rbf, length_scale, 0.0);
}

Kernel Kernel::matern(double length_scale, double nu) {
  if (!(length_scale > 0.0)) throw SpecError("kernel: Matern length_scale must be > 0");
  if (nu != 0.5 && nu != 1.5 && nu != 2.5) throw SpecError("kernel: Matern nu must be 0.5, 1.5 or 2.5");
  return Kernel(Type::Matern, length_scale, nu);
}

Kernel Kernel::white(double noise_level) {
  if (!(noise_level >= 0.0)) throw SpecError("kernel: noise_level must be >= 0");
  return Kernel(Type::White, noise_level, 0.0);
}

Kernel operator+(Kernel a, Kernel b) {
  Kernel k(Kernel::Type::Sum, 0.0, 0.0);
  k.left_ = std::make_shared<const Kernel>(std::move(a));
  k.right_ = std::make_shared<const Kernel>(std::move(b));
  return k;
}

Kernel operator*(Kernel a, Kernel b) {
  Kernel k(Kernel::Type::Product, 0.0, 0.0);
  k.left_ = std::make_shared<const Kernel>(std::move(a));
  k.right_ = std::make_shared<const Kernel>(std::move(b));
  return k;
}

double Kernel::stationary(double sq_dist) const {
  const double l = p1_;
  if (type_ == Type::Rbf) return std::exp(-0.5 * sq_dist / (l * l));
  const double r = std::sqrt(sq_dist) / l;
  if (p2_ == 0.5) return std::exp(-r);
  if (p2_ == 1.5) {
    const double s = std::sqrt(3.0) * r;
    return (1.0 + s) * std::exp(-s);
  }
  const double s = std::sqrt(5.0) * r;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

Eigen::MatrixXd Kernel::cross(const Matrix& a, const Matrix& b, bool same) const {
  switch (type_) {
    case Type::Constant: return Eigen::MatrixXd::Constant(a.rows(), b.rows(), p1_);
    case Type::White: {
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(a.rows(), b.rows());
      if (same) k.diagonal().setConstant(p1_);
      return k;
    }
    case Type::Rbf:
    case Type::Matern: {
      Eigen::MatrixXd k(a.rows(), b.rows());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
          k(i, j) = stationary((a.row(i) - b.row(j)).squaredNorm());
        }
      }
      return k;
    }
    case Type::Sum: return left_->cross(a, b, same) + right_->cross(a, b, same);
    case Type::Product:
      return left_->cross(a, b, same).cwiseProduct(right_->cross(a, b, same));
  }
  return {};
}

Eigen::VectorXd Kernel::diag(const Matrix& a) const {
  switch (type_) {
    case Type::Constant:
    case Type::White: return Eigen::VectorXd::Constant(a.rows(), p1_);
    case Type::Rbf:
    case Type::Matern: return Eigen::VectorXd::Ones(a.rows());
    case Type::Sum: return left_->diag(a) + right_->diag(a);
    case Type::Product: return left_->diag(a).cwiseProduct(right_->diag(a));
  }
  return {};
}

std::string Kernel::to_string() const {
  auto num = [](double v) { return format_sig(v, 17); };
  switch (type_) {
    case Type::Constant: return "ConstantKernel(constant_value=" + num(p1_) + ")";
    case Type::White: return "WhiteKernel(noise_level=" + num(p1_) + ")";
    case Type::Rbf: return "RBF(length_scale=" + num(p1_) + ")";
    case Type::Matern: return "Matern(length_scale=" + num(p1_) + ", nu=" + num(p2_) + ")";
    case Type::Sum: return left_->to_string() + " + " + right_->to_string();
    case Type::Product: {
      auto wrap = [](const Kernel& k) {
        return k.type_ == Type::Sum ? "(" + k.to_string() + ")" : k.to_string();
      };
      return wrap(*left_) + " * " + wrap(*right_);
    }
  }
  return {};
}

namespace {

// expr := term ('+' term)* ; term := factor ('*' factor)*
// factor := number ['**' number] | name '(' [key '=' number {',' ...}] ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Kernel parse() {
    Kernel k = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return k;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SpecError("kernel '" + std::string(text_) + "': " + what + " at offset " +
                    std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  Kernel expr() {
    Kernel k = term();
    while (accept("+")) k = k + term();
    return k;
  }

  Kernel term() {
    Kernel k = factor();
    while (true) {
      skip();
      if (text_.substr(pos_, 2) == "**") fail("misplaced '**'");
      if (!accept("*")) break;
      k = k * factor();
    }
    return k;
  }

  double number() {
    skip();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '-')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Kernel factor() {
    skip();
    if (accept("(")) {
      Kernel k = expr();
      if (!accept(")")) fail("expected ')'");
      return k;
    }
    if (pos_ < text_.size() &&
        (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      const double base = number();
      if (accept("**")) return Kernel::constant(std::pow(base, number()));
      return Kernel::constant(base);
    }
    const std::string name = identifier();
    if (name.empty()) fail("expected a kernel term");
    if (!accept("(")) fail("expected '(' after " + name);
    std::map<std::string, double> args;
    if (!accept(")")) {
      do {
        std::string key = identifier();
        for (auto& c : key) {
          if (c == '-') c = '_';
        }
        if (key.empty() || !accept("=")) fail("expected key=value");
        args[key] = number();
      } while (accept(","));
      if (!accept(")")) fail("expected ')'");
    }
    auto take = [&](const std::string& key, double fallback) {
      auto it = args.find(key);
      if (it == args.end()) return fallback;
      double v = it->second;
      args.erase(it);
      return v;
    };
    Kernel k = Kernel::constant(1.0);
    if (name == "RBF") {
      k = Kernel::rbf(take("length_scale", 1.0));
    } else if (name == "Matern") {
      const double l = take("length_scale", 1.0);
      k = Kernel::matern(l, take("nu", 1.5));
    } else if (name == "WhiteKernel" || name == "White") {
      k = Kernel::white(take("noise_level", 1.0));
    } else if (name == "ConstantKernel" || name == "Constant") {
      k = Kernel::constant(take("constant_value", 1.0));
    } else if (name == "ExpSineSquared") {
      throw SpecError("kernel: ExpSineSquared is not supported");
    } else {
      fail("unknown kernel '" + name + "'");
    }
    if (!args.empty()) fail("unknown argument '" + args.begin()->first + "' for " + name);
    return k;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Kernel Kernel::parse(std::string_view text) { return Parser(text).parse(); }

}  // namespace clad
