#include "cladbench/estimators/mlp.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "cladbench/data.hpp"
#include "cladbench/error.hpp"

namespace clad {

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "logistic") return Activation::Logistic;
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  throw SpecError("unknown activation '" + name + "'");
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Logistic: return "logistic";
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
  }
  return "relu";
}

std::vector<std::size_t> parse_hidden_layers(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != token.size() || v <= 0) {
      throw SpecError("hidden_layer_sizes: bad layer width '" + token + "'");
    }
    sizes.push_back(static_cast<std::size_t>(v));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' ) {
      flush();
    } else if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) {
      continue;
    } else {
      token.push_back(c);
    }
  }
  flush();
  return sizes;
}

namespace {

void activate(Activation a, Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::Identity: break;
    case Activation::Logistic: z = (1.0 / (1.0 + (-z.array()).exp())).matrix(); break;
    case Activation::Tanh: z = z.array().tanh().matrix(); break;
    case Activation::Relu: z = z.cwiseMax(0.0); break;
  }
}

// Derivative expressed through the activation output a = f(z).
void scale_by_derivative(Activation act, const Eigen::MatrixXd& a, Eigen::MatrixXd& delta) {
  switch (act) {
    case Activation::Identity: break;
    case Activation::Logistic: delta.array() *= a.array() * (1.0 - a.array()); break;
    case Activation::Tanh: delta.array() *= 1.0 - a.array().square(); break;
    case Activation::Relu: delta.array() *= (a.array() > 0.0).cast<double>(); break;
  }
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

MlpNetwork MlpNetwork::initialize(std::size_t inputs, const std::vector<std::size_t>& hidden,
                                  Activation activation, bool logistic_output, Rng& rng) {
  MlpNetwork net;
  net.activation = activation;
  net.logistic_output = logistic_output;
  std::vector<std::size_t> sizes{inputs};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(sizes[l + 1]);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index r = 0; r < fan_in; ++r) {
      for (Eigen::Index c = 0; c < fan_out; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
    Eigen::VectorXd b(fan_out);
    for (Eigen::Index c = 0; c < fan_out; ++c) b(c) = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

Vector MlpNetwork::logits(const Matrix& x) const {
  if (x.cols() != weights.front().rows()) throw ShapeError("mlp: feature arity mismatch");
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Eigen::MatrixXd z = a * weights[l];
    z.rowwise() += biases[l].transpose();
    if (l + 1 < weights.size()) activate(activation, z);
    a = std::move(z);
  }
  return a.col(0);
}

Vector MlpNetwork::output(const Matrix& x) const {
  Vector z = logits(x);
  if (logistic_output) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = logistic(z(i));
  }
  return z;
}

double MlpNetwork::loss(const Matrix& x, const Vector& y, double alpha, Vector* gradient) const {
  const auto n = static_cast<double>(x.rows());
  const std::size_t layers = weights.size();
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers + 1);
  acts.emplace_back(x);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = acts.back() * weights[l];
    z.rowwise() += biases[l].transpose();
    if (l + 1 < layers) activate(activation, z);
    acts.push_back(std::move(z));
  }
  const Eigen::VectorXd out = acts.back().col(0);

  double data_loss = 0.0;
  Eigen::MatrixXd delta(out.size(), 1);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (logistic_output) {
      data_loss += softplus(out(i)) - y(i) * out(i);
      delta(i, 0) = (logistic(out(i)) - y(i)) / n;
    } else {
      const double r = out(i) - y(i);
      data_loss += 0.5 * r * r;
      delta(i, 0) = r / n;
    }
  }
  double penalty = 0.0;
  for (const auto& w : weights) penalty += w.squaredNorm();
  const double total = data_loss / n + 0.5 * alpha * penalty / n;
  if (!gradient) return total;

  std::vector<Eigen::MatrixXd> grad_w(layers);
  std::vector<Eigen::VectorXd> grad_b(layers);
  for (std::size_t l = layers; l-- > 0;) {
    grad_w[l] = acts[l].transpose() * delta + (alpha / n) * weights[l];
    grad_b[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd back = delta * weights[l].transpose();
      scale_by_derivative(activation, acts[l], back);
      delta = std::move(back);
    }
  }
  gradient->resize(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    for (Eigen::Index r = 0; r < grad_w[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < grad_w[l].cols(); ++c) (*gradient)(pos++) = grad_w[l](r, c);
    }
    for (Eigen::Index c = 0; c < grad_b[l].size(); ++c) (*gradient)(pos++) = grad_b[l](c);
  }
  return total;
}

std::size_t MlpNetwork::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    count += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  }
  return count;
}

Vector MlpNetwork::flatten() const {
  Vector flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) flat(pos++) = weights[l](r, c);
    }
    for (Eigen::Index c = 0; c < biases[l].size(); ++c) flat(pos++) = biases[l](c);
  }
  return flat;
}

void MlpNetwork::assign(const Vector& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    throw ShapeError("mlp: parameter vector has the wrong length");
  }
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) weights[l](r, c) = flat(pos++);
    }
    for (Eigen::Index c = 0; c < biases[l].size(); ++c) biases[l](c) = flat(pos++);
  }
}

Vector MlpModel::predict(const Matrix& x) const {
  Vector out = net_.output(x);
  if (!net_.logistic_output) out = (out.array() * scale_ + offset_).matrix();
  return out;
}

Json MlpModel::parameters() const {
  Json weights = Json::array();
  Json biases = Json::array();
  for (std::size_t l = 0; l < net_.weights.size(); ++l) {
    weights.push_back(matrix_to_json(net_.weights[l]));
    biases.push_back(vector_to_json(net_.biases[l]));
  }
  return Json{{"activation", activation_name(net_.activation)},
              {"logistic_output", net_.logistic_output},
              {"weights", weights},
              {"biases", biases},
              {"target_offset", offset_},
              {"target_scale", scale_}};
}

std::unique_ptr<MlpModel> MlpModel::from_json(const Json& j) {
  MlpNetwork net;
  net.activation = parse_activation(j.at("activation").get<std::string>());
  net.logistic_output = j.at("logistic_output").get<bool>();
  for (const auto& w : j.at("weights")) net.weights.push_back(matrix_from_json(w));
  for (const auto& b : j.at("biases")) net.biases.push_back(vector_from_json(b));
  return std::make_unique<MlpModel>(std::move(net), j.at("target_offset").get<double>(),
                                    j.at("target_scale").get<double>());
}

std::unique_ptr<Estimator> fit_mlp_estimator(const EstimatorSpec& spec, const Matrix& x,
                                             const Vector& y, FitNotes& notes) {
  const bool classify = spec.kind == EstimatorKind::MlpClf;
  const auto hidden = parse_hidden_layers(spec.text("hidden_layer_sizes"));
  const Activation activation = parse_activation(spec.text("activation"));
  std::string solver = spec.text("solver");
  if (solver == "lbfgs") {
    notes["solver_requested"] = "lbfgs";
    solver = "adam";
  }
  notes["solver"] = solver;
  const double alpha = spec.real("alpha");
  const double lr = spec.real("learning_rate_init");
  const double momentum = spec.real("momentum");
  const auto max_iter = spec.integer("max_iter");
  const double tol = spec.real("tol");
  const auto patience = spec.integer("n_iter_no_change");

  // Regression targets are standardized internally and mapped back on predict.
  double offset = 0.0;
  double scale = 1.0;
  Vector target = y;
  if (!classify) {
    offset = y.mean();
    const double sd = std::sqrt((y.array() - offset).square().mean());
    scale = sd > 0.0 ? sd : 1.0;
    target = ((y.array() - offset) / scale).matrix();
  }

  Rng rng(spec.seed);
  MlpNetwork net =
      MlpNetwork::initialize(static_cast<std::size_t>(x.cols()), hidden, activation, classify, rng);
  Vector params = net.flatten();
  Vector grad;
  Vector velocity = Vector::Zero(params.size());
  Vector m1 = Vector::Zero(params.size());
  Vector m2 = Vector::Zero(params.size());
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;

  double best = std::numeric_limits<double>::infinity();
  std::int64_t stale = 0;
  std::int64_t epoch = 0;
  double last = 0.0;
  std::string stop = "max_iter";
  for (epoch = 1; epoch <= max_iter; ++epoch) {
    net.assign(params);
    last = net.loss(x, target, alpha, &grad);
    if (!std::isfinite(last)) throw NumericalError("mlp training diverged at epoch " + std::to_string(epoch));
    if (solver == "sgd") {
      velocity = momentum * velocity - lr * grad;
      params += momentum * velocity - lr * grad;
    } else {
      m1 = kBeta1 * m1 + (1.0 - kBeta1) * grad;
      m2 = kBeta2 * m2 + (1.0 - kBeta2) * grad.cwiseProduct(grad);
      const auto t = static_cast<double>(epoch);
      const double step = lr * std::sqrt(1.0 - std::pow(kBeta2, t)) / (1.0 - std::pow(kBeta1, t));
      params.array() -= step * m1.array() / (m2.array().sqrt() + kEps);
    }
    if (last > best - tol) {
      ++stale;
    } else {
      stale = 0;
    }
    best = std::min(best, last);
    if (stale >= patience) {
      stop = "no_improvement";
      break;
    }
  }
  net.assign(params);
  notes["epochs"] = std::to_string(std::min(epoch, max_iter));
  notes["final_loss"] = format_sig(last, 9);
  notes["stop_reason"] = stop;
  return std::make_unique<MlpModel>(std::move(net), offset, scale);
}

}  // namespace clad
