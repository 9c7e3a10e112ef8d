#include "aiaas/ai/activation.hpp"

#include <cmath>
#include <string>

#include "aiaas/common/error.hpp"

namespace aiaas::ai {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Elu: return "elu";
    case Activation::Linear: return "linear";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
  }
  return "linear";
}

Activation parse_activation(std::string_view text) {
  if (text == "elu") return Activation::Elu;
  if (text == "linear") return Activation::Linear;
  if (text == "sigmoid") return Activation::Sigmoid;
  if (text == "tanh") return Activation::Tanh;
  throw ValidationError("unknown activation '" + std::string(text) + "'");
}

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void activate(Activation a, Eigen::Ref<Eigen::MatrixXd> z) {
  switch (a) {
    case Activation::Linear:
      return;
    case Activation::Elu:
      z = z.unaryExpr([](double v) { return elu(v); });
      return;
    case Activation::Sigmoid:
      z = z.unaryExpr([](double v) { return sigmoid(v); });
      return;
    case Activation::Tanh:
      z = z.array().tanh().matrix();
      return;
  }
}

Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z, const Eigen::MatrixXd& y) {
  switch (a) {
    case Activation::Linear:
      return Eigen::MatrixXd::Ones(z.rows(), z.cols());
    case Activation::Elu:
      // For z <= 0, d/dz (e^z - 1) = e^z = y + 1.
      return z.binaryExpr(y, [](double zv, double yv) { return zv > 0.0 ? 1.0 : yv + 1.0; });
    case Activation::Sigmoid:
      return (y.array() * (1.0 - y.array())).matrix();
    case Activation::Tanh:
      return (1.0 - y.array().square()).matrix();
  }
  return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

}  // namespace aiaas::ai
