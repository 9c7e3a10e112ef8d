#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aiaas/ai/dense_net.hpp"

namespace aiaas::ai {

/// Layer widths of the monitoring autoencoder: 111-90-85-75 encoder,
/// 75-90-111 decoder.
inline constexpr Eigen::Index kAutoencoderWidths[] = {111, 90, 85, 75, 90, 111};
inline constexpr Activation kAutoencoderActivations[] = {
    Activation::Elu, Activation::Elu, Activation::Linear, Activation::Elu, Activation::Sigmoid};
inline constexpr std::size_t kBottleneckIndex = 3;  // layers [0, 3) encode
inline constexpr Eigen::Index kCodeWidth = 75;
inline constexpr Eigen::Index kInputWidth = 111;

/// A dense stack split at a bottleneck: layers before `bottleneck_index` form
/// the encoder, the rest the decoder.
class Autoencoder {
 public:
  Autoencoder(DenseNet net, std::size_t bottleneck_index);

  /// The five-layer monitoring autoencoder, initialized from `seed`.
  static Autoencoder init(std::uint64_t seed);
  /// Any symmetric-or-not stack, e.g. {8,5,3,5,8} with bottleneck 2.
  static Autoencoder init(std::span<const Eigen::Index> widths, std::span<const Activation> activations,
                          std::size_t bottleneck_index, std::uint64_t seed);

  const DenseNet& net() const { return net_; }
  DenseNet& net() { return net_; }
  std::size_t bottleneck_index() const { return bottleneck_; }
  Eigen::Index input_width() const { return net_.input_width(); }
  Eigen::Index code_width() const { return net_.layers()[bottleneck_ - 1].outputs(); }
  /// code width / input width.
  double compression_ratio() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const { return net_.forward(x); }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const { return net_.forward_range(x, 0, bottleneck_); }
  Eigen::VectorXd decode(const Eigen::VectorXd& code) const {
    return net_.forward_range(code, bottleneck_, net_.layers().size());
  }
  /// Row-per-sample reconstruction.
  Eigen::MatrixXd reconstruct_rows(const Eigen::MatrixXd& rows) const;

  friend bool operator==(const Autoencoder& a, const Autoencoder& b) {
    return a.bottleneck_ == b.bottleneck_ && a.net_ == b.net_;
  }

 private:
  DenseNet net_;
  std::size_t bottleneck_;
};

/// Trains the autoencoder to reproduce `rows01` (rows are samples in [0,1]).
TrainResult ae_train(Autoencoder& model, const Eigen::MatrixXd& rows01, const TrainConfig& config);

}  // namespace aiaas::ai
