#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aiaas/ai/dense_net.hpp"
#include "aiaas/ai/optimizer.hpp"

namespace aiaas::ai {

inline constexpr Eigen::Index kDefaultHiddenSize = 16;
inline constexpr std::size_t kDefaultWindow = 30;

/// Single-layer LSTM over a univariate series with a linear readout that
/// emits `horizon` future values from the last hidden state.
///
/// Gate rows of `gate_weights` / `gate_bias` are stacked as
/// [input; forget; output; cell], each `hidden_size` tall. The gate weight
/// columns are [x_t, h_{t-1}...]. Values are scaled into [0, 1] with the
/// training series range before entering the cell.
struct RecurrentModel {
  Eigen::Index hidden_size = 0;
  std::size_t window = 0;
  std::size_t horizon = 0;
  Eigen::MatrixXd gate_weights;     // 4H x (1 + H)
  Eigen::VectorXd gate_bias;        // 4H
  Eigen::MatrixXd readout_weights;  // horizon x H
  Eigen::VectorXd readout_bias;     // horizon
  double series_min = 0.0;
  double series_max = 1.0;

  /// Throws ValidationError when dimensions disagree or entries are not
  /// finite.
  void validate() const;

  /// Uniform fan-based weights, zero biases except the forget gate at 1.
  static RecurrentModel init(Eigen::Index hidden_size, std::size_t window, std::size_t horizon,
                             std::uint64_t seed);

  double scale(double v) const;
  double unscale(double v) const;

  friend bool operator==(const RecurrentModel&, const RecurrentModel&) = default;
};

struct RecurrentGradients {
  Eigen::MatrixXd gate_weights;
  Eigen::VectorXd gate_bias;
  Eigen::MatrixXd readout_weights;
  Eigen::VectorXd readout_bias;
};

/// Scaled-space forward pass. `inputs` is window x batch, result is
/// horizon x batch.
Eigen::MatrixXd lstm_forward(const RecurrentModel& model, const Eigen::MatrixXd& inputs);

/// MSE over every horizon x batch element and its gradient by
/// backpropagation through the window.
double lstm_loss_and_gradients(const RecurrentModel& model, const Eigen::MatrixXd& inputs,
                               const Eigen::MatrixXd& targets, RecurrentGradients& grads);

struct RecurrentTrainResult {
  RecurrentModel model;
  double initial_loss = 0.0;
  std::vector<double> loss_history;
};

/// Trains on every (window, horizon) slice of `series`. Throws
/// ValidationError when series.size() <= window + horizon and
/// DivergenceError on a non-finite loss.
RecurrentTrainResult rnn_train(std::span<const double> series, std::size_t window, std::size_t horizon,
                               const TrainConfig& config, Eigen::Index hidden_size = kDefaultHiddenSize);

/// Forecasts the next `horizon` raw values from the last `window` raw
/// values.
std::vector<double> rnn_predict(const RecurrentModel& model, std::span<const double> window_values);

/// Builds scaled training slices: inputs window x n, targets horizon x n.
void make_windows(const RecurrentModel& model, std::span<const double> series, Eigen::MatrixXd& inputs,
                  Eigen::MatrixXd& targets);

}  // namespace aiaas::ai
