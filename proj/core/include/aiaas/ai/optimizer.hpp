#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace aiaas::ai {

enum class OptimizerKind { Sgd, Adam };

std::string_view to_string(OptimizerKind k);
OptimizerKind parse_optimizer(std::string_view text);

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::Adam;
  bool shuffle = true;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  /// Throws ValidationError unless learning_rate >= 0, epochs >= 1 and
  /// batch_size >= 1. A zero learning rate is accepted for frozen runs.
  void validate() const;
};

/// First-order optimizer over a fixed list of parameter blocks. Blocks are
/// addressed by index; the Adam moments are kept per block.
class Optimizer {
 public:
  explicit Optimizer(const TrainConfig& config) : config_(config) {}

  /// Starts a new step (advances the Adam bias-correction counter).
  void begin_step() { ++step_; }
  void update(std::size_t block, double* param, const double* grad, Eigen::Index n);

  template <typename Derived, typename GradDerived>
  void update(std::size_t block, Eigen::PlainObjectBase<Derived>& param,
              const Eigen::PlainObjectBase<GradDerived>& grad) {
    update(block, param.data(), grad.data(), param.size());
  }

 private:
  TrainConfig config_;
  long step_ = 0;
  std::vector<Eigen::ArrayXd> m_;
  std::vector<Eigen::ArrayXd> v_;
};

}  // namespace aiaas::ai
