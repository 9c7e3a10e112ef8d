#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aiaas/ai/activation.hpp"
#include "aiaas/ai/optimizer.hpp"

namespace aiaas::ai {

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::Linear;

  Eigen::Index inputs() const { return weights.cols(); }
  Eigen::Index outputs() const { return weights.rows(); }
};

struct DenseGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;
};

/// Fully connected feed-forward stack.
class DenseNet {
 public:
  DenseNet() = default;
  explicit DenseNet(std::vector<DenseLayer> layers);

  /// widths = {in, h1, ..., out}; activations.size() == widths.size() - 1.
  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static DenseNet init(std::span<const Eigen::Index> widths, std::span<const Activation> activations,
                       std::uint64_t seed);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }
  Eigen::Index input_width() const { return layers_.front().inputs(); }
  Eigen::Index output_width() const { return layers_.back().outputs(); }

  /// Applies layers [first, last) to one vector. Throws ValidationError on
  /// width mismatch or non-finite input.
  Eigen::VectorXd forward_range(const Eigen::VectorXd& x, std::size_t first, std::size_t last) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const { return forward_range(x, 0, layers_.size()); }

  /// Column-per-sample batch forward pass.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  /// Mean squared error over every element of the batch (columns are
  /// samples) and its gradient by reverse-mode differentiation.
  double loss_and_gradients(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                            DenseGradients& grads) const;
  double loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) const;

  void apply(Optimizer& opt, DenseGradients& grads);

  friend bool operator==(const DenseNet& a, const DenseNet& b);

 private:
  std::vector<DenseLayer> layers_;
};

struct TrainResult {
  double initial_loss = 0.0;
  /// Full-dataset MSE after each epoch.
  std::vector<double> loss_history;
};

/// Minibatch training on `inputs` -> `targets` (rows are samples). Throws
/// DivergenceError with the epoch index when the loss becomes non-finite.
TrainResult train_dense(DenseNet& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                        const TrainConfig& config);

}  // namespace aiaas::ai
