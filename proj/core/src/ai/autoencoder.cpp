#include "aiaas/ai/autoencoder.hpp"

#include "aiaas/common/error.hpp"

namespace aiaas::ai {

Autoencoder::Autoencoder(DenseNet net, std::size_t bottleneck_index)
    : net_(std::move(net)), bottleneck_(bottleneck_index) {
  if (bottleneck_ == 0 || bottleneck_ >= net_.layers().size()) {
    throw ValidationError("bottleneck index must split the stack into encoder and decoder");
  }
  if (net_.input_width() != net_.output_width()) {
    throw ValidationError("autoencoder output width must equal input width");
  }
}

Autoencoder Autoencoder::init(std::uint64_t seed) {
  return init(kAutoencoderWidths, kAutoencoderActivations, kBottleneckIndex, seed);
}

Autoencoder Autoencoder::init(std::span<const Eigen::Index> widths, std::span<const Activation> activations,
                              std::size_t bottleneck_index, std::uint64_t seed) {
  return Autoencoder(DenseNet::init(widths, activations, seed), bottleneck_index);
}

double Autoencoder::compression_ratio() const {
  return static_cast<double>(code_width()) / static_cast<double>(input_width());
}

Eigen::MatrixXd Autoencoder::reconstruct_rows(const Eigen::MatrixXd& rows) const {
  return net_.forward_batch(rows.transpose()).transpose();
}

TrainResult ae_train(Autoencoder& model, const Eigen::MatrixXd& rows01, const TrainConfig& config) {
  if (rows01.cols() != model.input_width()) throw ValidationError("dataset width does not match the model");
  if (!rows01.allFinite()) throw ValidationError("dataset contains non-finite values");
  return train_dense(model.net(), rows01, rows01, config);
}

}  // namespace aiaas::ai
