#include "aiaas/ai/optimizer.hpp"

#include <cmath>
#include <string>

#include "aiaas/common/error.hpp"

namespace aiaas::ai {

std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::Adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer(std::string_view text) {
  if (text == "adam") return OptimizerKind::Adam;
  if (text == "sgd") return OptimizerKind::Sgd;
  throw ValidationError("unknown optimizer '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate must be finite and >= 0");
  }
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
}

void Optimizer::update(std::size_t block, double* param, const double* grad, Eigen::Index n) {
  Eigen::Map<Eigen::ArrayXd> p(param, n);
  Eigen::Map<const Eigen::ArrayXd> g(grad, n);
  if (config_.optimizer == OptimizerKind::Sgd) {
    p -= config_.learning_rate * g;
    return;
  }
  if (block >= m_.size()) {
    m_.resize(block + 1);
    v_.resize(block + 1);
  }
  if (m_[block].size() != n) {
    m_[block] = Eigen::ArrayXd::Zero(n);
    v_[block] = Eigen::ArrayXd::Zero(n);
  }
  m_[block] = config_.beta1 * m_[block] + (1.0 - config_.beta1) * g;
  v_[block] = config_.beta2 * v_[block] + (1.0 - config_.beta2) * g.square();
  const double t = static_cast<double>(step_ < 1 ? 1 : step_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  p -= config_.learning_rate * (m_[block] / c1) / ((v_[block] / c2).sqrt() + config_.epsilon);
}

}  // namespace aiaas::ai
