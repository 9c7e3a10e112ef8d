#include "aiaas/ai/dense_net.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "aiaas/common/error.hpp"
#include "aiaas/common/random.hpp"

namespace aiaas::ai {

DenseNet::DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ValidationError("dense net needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    if (layer.bias.size() != layer.outputs()) throw ValidationError("layer " + std::to_string(l) + ": bias size");
    if (l > 0 && layer.inputs() != layers_[l - 1].outputs()) {
      throw ValidationError("layer " + std::to_string(l) + ": input width does not match previous output");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw ValidationError("layer " + std::to_string(l) + ": non-finite parameter");
    }
  }
}

DenseNet DenseNet::init(std::span<const Eigen::Index> widths, std::span<const Activation> activations,
                        std::uint64_t seed) {
  if (widths.size() < 2 || activations.size() != widths.size() - 1) {
    throw ValidationError("dense net init: need widths.size() == activations.size() + 1");
  }
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const Eigen::Index in = widths[l];
    const Eigen::Index out = widths[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    DenseLayer layer;
    layer.weights.resize(out, in);
    // Row-major draw order so the stream maps to the serialized layout.
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = rng.uniform(-limit, limit);
    }
    layer.bias = Eigen::VectorXd::Zero(out);
    layer.activation = activations[l];
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers));
}

Eigen::VectorXd DenseNet::forward_range(const Eigen::VectorXd& x, std::size_t first, std::size_t last) const {
  if (first >= last || last > layers_.size()) throw ValidationError("bad layer range");
  if (x.size() != layers_[first].inputs()) {
    throw ValidationError("input width " + std::to_string(x.size()) + ", expected " +
                          std::to_string(layers_[first].inputs()));
  }
  if (!x.allFinite()) throw ValidationError("non-finite input");
  Eigen::VectorXd a = x;
  for (std::size_t l = first; l < last; ++l) {
    const DenseLayer& layer = layers_[l];
    Eigen::VectorXd z = layer.weights * a + layer.bias;
    activate(layer.activation, z);
    a = std::move(z);
  }
  return a;
}

Eigen::MatrixXd DenseNet::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_width()) throw ValidationError("batch input width mismatch");
  Eigen::MatrixXd a = inputs;
  for (const DenseLayer& layer : layers_) {
    Eigen::MatrixXd z = layer.weights * a;
    z.colwise() += layer.bias;
    activate(layer.activation, z);
    a = std::move(z);
  }
  return a;
}

double DenseNet::loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) const {
  const Eigen::MatrixXd out = forward_batch(inputs);
  return (out - targets).squaredNorm() / static_cast<double>(out.size());
}

double DenseNet::loss_and_gradients(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                                    DenseGradients& grads) const {
  const std::size_t n_layers = layers_.size();
  std::vector<Eigen::MatrixXd> pre(n_layers);
  std::vector<Eigen::MatrixXd> post(n_layers + 1);
  post[0] = inputs;
  for (std::size_t l = 0; l < n_layers; ++l) {
    pre[l] = layers_[l].weights * post[l];
    pre[l].colwise() += layers_[l].bias;
    post[l + 1] = pre[l];
    activate(layers_[l].activation, post[l + 1]);
  }
  const Eigen::MatrixXd diff = post[n_layers] - targets;
  const double scale = 1.0 / static_cast<double>(diff.size());
  const double loss = diff.squaredNorm() * scale;

  grads.weights.resize(n_layers);
  grads.bias.resize(n_layers);
  Eigen::MatrixXd delta = (2.0 * scale * diff).cwiseProduct(
      activation_derivative(layers_[n_layers - 1].activation, pre[n_layers - 1], post[n_layers]));
  for (std::size_t l = n_layers; l-- > 0;) {
    grads.weights[l] = delta * post[l].transpose();
    grads.bias[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (layers_[l].weights.transpose() * delta)
                  .cwiseProduct(activation_derivative(layers_[l - 1].activation, pre[l - 1], post[l]));
    }
  }
  return loss;
}

void DenseNet::apply(Optimizer& opt, DenseGradients& grads) {
  opt.begin_step();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    opt.update(2 * l, layers_[l].weights, grads.weights[l]);
    opt.update(2 * l + 1, layers_[l].bias, grads.bias[l]);
  }
}

bool operator==(const DenseNet& a, const DenseNet& b) {
  if (a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    const DenseLayer& x = a.layers_[l];
    const DenseLayer& y = b.layers_[l];
    if (x.activation != y.activation || x.weights.rows() != y.weights.rows() ||
        x.weights.cols() != y.weights.cols() || x.weights != y.weights || x.bias != y.bias) {
      return false;
    }
  }
  return true;
}

TrainResult train_dense(DenseNet& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                        const TrainConfig& config) {
  config.validate();
  if (inputs.rows() != targets.rows() || inputs.rows() == 0) {
    throw ValidationError("training needs equal, non-zero sample counts");
  }
  const Eigen::MatrixXd x = inputs.transpose();
  const Eigen::MatrixXd y = targets.transpose();
  const Eigen::Index n = x.cols();

  Rng rng(config.seed ^ 0x747261696eULL);
  Optimizer opt(config);
  DenseGradients grads;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  TrainResult result;
  result.initial_loss = net.loss(x, y);
  result.loss_history.reserve(static_cast<std::size_t>(config.epochs));
  Eigen::MatrixXd bx;
  Eigen::MatrixXd by;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    }
    for (Eigen::Index start = 0; start < n; start += config.batch_size) {
      const Eigen::Index len = std::min<Eigen::Index>(config.batch_size, n - start);
      bx.resize(x.rows(), len);
      by.resize(y.rows(), len);
      for (Eigen::Index j = 0; j < len; ++j) {
        bx.col(j) = x.col(order[static_cast<std::size_t>(start + j)]);
        by.col(j) = y.col(order[static_cast<std::size_t>(start + j)]);
      }
      const double batch_loss = net.loss_and_gradients(bx, by, grads);
      if (!std::isfinite(batch_loss)) {
        throw DivergenceError(epoch, "training diverged at epoch " + std::to_string(epoch));
      }
      if (config.learning_rate > 0.0) net.apply(opt, grads);
    }
    const double epoch_loss = net.loss(x, y);
    if (!std::isfinite(epoch_loss)) {
      throw DivergenceError(epoch, "training diverged at epoch " + std::to_string(epoch));
    }
    result.loss_history.push_back(epoch_loss);
  }
  return result;
}

}  // namespace aiaas::ai
