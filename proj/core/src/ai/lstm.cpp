#include "aiaas/ai/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aiaas/common/error.hpp"
#include "aiaas/common/random.hpp"

namespace aiaas::ai {

namespace {

Eigen::MatrixXd sigmoid_of(const Eigen::MatrixXd& z) {
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

// Per-step activations kept for the backward pass.
struct Tape {
  std::vector<Eigen::MatrixXd> i, f, o, g, c, h, tanh_c;  // each H x batch
};

Eigen::MatrixXd run_cell(const RecurrentModel& m, const Eigen::MatrixXd& inputs, Tape* tape) {
  const Eigen::Index H = m.hidden_size;
  const Eigen::Index batch = inputs.cols();
  const auto steps = static_cast<std::size_t>(inputs.rows());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(H, batch);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(H, batch);
  if (tape != nullptr) {
    for (auto* v : {&tape->i, &tape->f, &tape->o, &tape->g, &tape->c, &tape->h, &tape->tanh_c}) {
      v->clear();
      v->reserve(steps + 1);
    }
    tape->h.push_back(h);
    tape->c.push_back(c);
  }
  const auto wx = m.gate_weights.col(0);
  const auto wh = m.gate_weights.rightCols(H);
  for (std::size_t t = 0; t < steps; ++t) {
    Eigen::MatrixXd z = wh * h + wx * inputs.row(static_cast<Eigen::Index>(t));
    z.colwise() += m.gate_bias;
    Eigen::MatrixXd ig = sigmoid_of(z.middleRows(0, H));
    Eigen::MatrixXd fg = sigmoid_of(z.middleRows(H, H));
    Eigen::MatrixXd og = sigmoid_of(z.middleRows(2 * H, H));
    Eigen::MatrixXd gg = z.middleRows(3 * H, H).array().tanh().matrix();
    c = fg.cwiseProduct(c) + ig.cwiseProduct(gg);
    Eigen::MatrixXd tc = c.array().tanh().matrix();
    h = og.cwiseProduct(tc);
    if (tape != nullptr) {
      tape->i.push_back(std::move(ig));
      tape->f.push_back(std::move(fg));
      tape->o.push_back(std::move(og));
      tape->g.push_back(std::move(gg));
      tape->c.push_back(c);
      tape->h.push_back(h);
      tape->tanh_c.push_back(std::move(tc));
    }
  }
  Eigen::MatrixXd y = m.readout_weights * h;
  y.colwise() += m.readout_bias;
  return y;
}

void apply_gradients(RecurrentModel& m, Optimizer& opt, RecurrentGradients& g) {
  opt.begin_step();
  opt.update(0, m.gate_weights, g.gate_weights);
  opt.update(1, m.gate_bias, g.gate_bias);
  opt.update(2, m.readout_weights, g.readout_weights);
  opt.update(3, m.readout_bias, g.readout_bias);
}

double full_loss(const RecurrentModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return (lstm_forward(m, x) - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

void RecurrentModel::validate() const {
  const Eigen::Index H = hidden_size;
  if (H < 1) throw ValidationError("recurrent model: hidden_size must be >= 1");
  if (window < 1) throw ValidationError("recurrent model: window must be >= 1");
  if (horizon < 1) throw ValidationError("recurrent model: horizon must be >= 1");
  const auto hz = static_cast<Eigen::Index>(horizon);
  if (gate_weights.rows() != 4 * H || gate_weights.cols() != 1 + H || gate_bias.size() != 4 * H ||
      readout_weights.rows() != hz || readout_weights.cols() != H || readout_bias.size() != hz) {
    throw ValidationError("recurrent model: inconsistent dimensions");
  }
  if (!gate_weights.allFinite() || !gate_bias.allFinite() || !readout_weights.allFinite() ||
      !readout_bias.allFinite() || !std::isfinite(series_min) || !std::isfinite(series_max) ||
      series_max < series_min) {
    throw ValidationError("recurrent model: non-finite parameter or bad scaling range");
  }
}

RecurrentModel RecurrentModel::init(Eigen::Index hidden_size, std::size_t window, std::size_t horizon,
                                    std::uint64_t seed) {
  RecurrentModel m;
  m.hidden_size = hidden_size;
  m.window = window;
  m.horizon = horizon;
  if (hidden_size < 1 || window < 1 || horizon < 1) {
    throw ValidationError("recurrent model: hidden_size, window and horizon must be >= 1");
  }
  const Eigen::Index H = hidden_size;
  const auto hz = static_cast<Eigen::Index>(horizon);
  Rng rng(seed);
  m.gate_weights.resize(4 * H, 1 + H);
  const double gate_limit = std::sqrt(6.0 / static_cast<double>(1 + H + H));
  for (Eigen::Index r = 0; r < m.gate_weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.gate_weights.cols(); ++c) m.gate_weights(r, c) = rng.uniform(-gate_limit, gate_limit);
  }
  m.gate_bias = Eigen::VectorXd::Zero(4 * H);
  m.gate_bias.segment(H, H).setOnes();
  m.readout_weights.resize(hz, H);
  const double out_limit = std::sqrt(6.0 / static_cast<double>(H + hz));
  for (Eigen::Index r = 0; r < hz; ++r) {
    for (Eigen::Index c = 0; c < H; ++c) m.readout_weights(r, c) = rng.uniform(-out_limit, out_limit);
  }
  m.readout_bias = Eigen::VectorXd::Zero(hz);
  return m;
}

double RecurrentModel::scale(double v) const {
  const double range = series_max - series_min;
  return range > 0.0 ? (v - series_min) / range : 0.5;
}

double RecurrentModel::unscale(double v) const {
  const double range = series_max - series_min;
  return range > 0.0 ? series_min + v * range : series_min;
}

Eigen::MatrixXd lstm_forward(const RecurrentModel& model, const Eigen::MatrixXd& inputs) {
  return run_cell(model, inputs, nullptr);
}

double lstm_loss_and_gradients(const RecurrentModel& m, const Eigen::MatrixXd& inputs,
                               const Eigen::MatrixXd& targets, RecurrentGradients& grads) {
  const Eigen::Index H = m.hidden_size;
  Tape tape;
  const Eigen::MatrixXd y = run_cell(m, inputs, &tape);
  const Eigen::MatrixXd diff = y - targets;
  const double scale = 1.0 / static_cast<double>(diff.size());
  const double loss = diff.squaredNorm() * scale;

  const Eigen::MatrixXd dy = 2.0 * scale * diff;
  const std::size_t steps = tape.i.size();
  grads.readout_weights = dy * tape.h[steps].transpose();
  grads.readout_bias = dy.rowwise().sum();
  grads.gate_weights = Eigen::MatrixXd::Zero(4 * H, 1 + H);
  grads.gate_bias = Eigen::VectorXd::Zero(4 * H);

  const auto wh = m.gate_weights.rightCols(H);
  Eigen::MatrixXd dh = m.readout_weights.transpose() * dy;
  Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(H, inputs.cols());
  Eigen::MatrixXd dz(4 * H, inputs.cols());
  for (std::size_t t = steps; t-- > 0;) {
    const Eigen::ArrayXXd ig = tape.i[t].array();
    const Eigen::ArrayXXd fg = tape.f[t].array();
    const Eigen::ArrayXXd og = tape.o[t].array();
    const Eigen::ArrayXXd gg = tape.g[t].array();
    const Eigen::ArrayXXd tc = tape.tanh_c[t].array();
    const Eigen::ArrayXXd dca = dc.array() + dh.array() * og * (1.0 - tc.square());
    dz.middleRows(0, H) = (dca * gg * ig * (1.0 - ig)).matrix();
    dz.middleRows(H, H) = (dca * tape.c[t].array() * fg * (1.0 - fg)).matrix();
    dz.middleRows(2 * H, H) = (dh.array() * tc * og * (1.0 - og)).matrix();
    dz.middleRows(3 * H, H) = (dca * ig * (1.0 - gg.square())).matrix();
    grads.gate_weights.col(0) += dz * inputs.row(static_cast<Eigen::Index>(t)).transpose();
    grads.gate_weights.rightCols(H) += dz * tape.h[t].transpose();
    grads.gate_bias += dz.rowwise().sum();
    dh = wh.transpose() * dz;
    dc = (dca * fg).matrix();
  }
  return loss;
}

void make_windows(const RecurrentModel& model, std::span<const double> series, Eigen::MatrixXd& inputs,
                  Eigen::MatrixXd& targets) {
  const std::size_t span_len = model.window + model.horizon;
  if (series.size() < span_len) {
    throw ValidationError("recurrent model: series of " + std::to_string(series.size()) +
                          " samples is shorter than window + horizon");
  }
  const std::size_t n = series.size() - span_len + 1;
  inputs.resize(static_cast<Eigen::Index>(model.window), static_cast<Eigen::Index>(n));
  targets.resize(static_cast<Eigen::Index>(model.horizon), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < model.window; ++k) {
      inputs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)) = model.scale(series[s + k]);
    }
    for (std::size_t k = 0; k < model.horizon; ++k) {
      targets(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)) =
          model.scale(series[s + model.window + k]);
    }
  }
}

RecurrentTrainResult rnn_train(std::span<const double> series, std::size_t window, std::size_t horizon,
                               const TrainConfig& config, Eigen::Index hidden_size) {
  config.validate();
  if (series.size() <= window + horizon) {
    throw ValidationError("insufficient data: " + std::to_string(series.size()) + " samples for window " +
                          std::to_string(window) + " + horizon " + std::to_string(horizon));
  }
  for (double v : series) {
    if (!std::isfinite(v)) throw ValidationError("series contains non-finite values");
  }
  RecurrentTrainResult result;
  RecurrentModel& m = result.model;
  m = RecurrentModel::init(hidden_size, window, horizon, config.seed);
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  m.series_min = *lo;
  m.series_max = *hi;

  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  make_windows(m, series, x, y);
  const Eigen::Index n = x.cols();

  Rng rng(config.seed ^ 0x6c73746dULL);
  Optimizer opt(config);
  RecurrentGradients grads;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  result.initial_loss = full_loss(m, x, y);
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
      const double batch_loss = lstm_loss_and_gradients(m, bx, by, grads);
      if (!std::isfinite(batch_loss)) {
        throw DivergenceError(epoch, "recurrent training diverged at epoch " + std::to_string(epoch));
      }
      if (config.learning_rate > 0.0) apply_gradients(m, opt, grads);
    }
    const double epoch_loss = full_loss(m, x, y);
    if (!std::isfinite(epoch_loss)) {
      throw DivergenceError(epoch, "recurrent training diverged at epoch " + std::to_string(epoch));
    }
    result.loss_history.push_back(epoch_loss);
  }
  return result;
}

std::vector<double> rnn_predict(const RecurrentModel& model, std::span<const double> window_values) {
  if (window_values.size() != model.window) {
    throw ValidationError("rnn_predict: expected " + std::to_string(model.window) + " values, got " +
                          std::to_string(window_values.size()));
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(model.window), 1);
  for (std::size_t k = 0; k < model.window; ++k) {
    if (!std::isfinite(window_values[k])) throw ValidationError("rnn_predict: non-finite input");
    x(static_cast<Eigen::Index>(k), 0) = model.scale(window_values[k]);
  }
  const Eigen::MatrixXd y = lstm_forward(model, x);
  std::vector<double> out(model.horizon);
  for (std::size_t k = 0; k < model.horizon; ++k) out[k] = model.unscale(y(static_cast<Eigen::Index>(k), 0));
  return out;
}

}  // namespace aiaas::ai
