#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace aiaas::ai {

enum class Activation { Elu, Linear, Sigmoid, Tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

/// elu(x) = x for x > 0, exp(x) - 1 otherwise (alpha = 1).
double elu(double x);
double sigmoid(double x);

/// Applies `a` element-wise in place.
void activate(Activation a, Eigen::Ref<Eigen::MatrixXd> z);

/// d(activation)/dz given the pre-activation z and the output y = act(z),
/// element-wise.
Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z, const Eigen::MatrixXd& y);

}  // namespace aiaas::ai
