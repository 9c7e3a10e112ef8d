#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "aiaas/ai/autoencoder.hpp"
#include "aiaas/ai/error_distribution.hpp"
#include "aiaas/ai/linear.hpp"
#include "aiaas/ai/lstm.hpp"
#include "aiaas/ai/model_io.hpp"
#include "aiaas/common/error.hpp"
#include "aiaas/metrics/dataset.hpp"
#include "aiaas/metrics/scrape.hpp"
#include "aiaas/sdi/topology_state.hpp"
#include "gradcheck.hpp"

using namespace aiaas;
using namespace aiaas::ai;

namespace {

Eigen::VectorXd random_input(std::uint64_t seed, Eigen::Index n) {
  Rng rng(seed);
  return testgen::uniform_matrix(rng, n, 1, 0.0, 1.0);
}

// Straightforward re-implementation of the forward pass with scalar loops.
std::vector<double> oracle_forward(const DenseNet& net, std::vector<double> x) {
  for (const DenseLayer& layer : net.layers()) {
    std::vector<double> y(static_cast<std::size_t>(layer.outputs()));
    for (Eigen::Index o = 0; o < layer.outputs(); ++o) {
      double z = layer.bias(o);
      for (Eigen::Index i = 0; i < layer.inputs(); ++i) z += layer.weights(o, i) * x[static_cast<std::size_t>(i)];
      switch (layer.activation) {
        case Activation::Elu: z = z > 0 ? z : std::exp(z) - 1.0; break;
        case Activation::Sigmoid: z = 1.0 / (1.0 + std::exp(-z)); break;
        case Activation::Tanh: z = std::tanh(z); break;
        case Activation::Linear: break;
      }
      y[static_cast<std::size_t>(o)] = z;
    }
    x = std::move(y);
  }
  return x;
}

metrics::TimeSeries series(std::vector<double> values) {
  metrics::TimeSeries s{"m", {}, std::move(values)};
  for (std::size_t i = 0; i < s.values.size(); ++i) s.timestamps.push_back(static_cast<double>(i));
  return s;
}

}  // namespace

TEST(Activation, EluExamples) {
  EXPECT_EQ(elu(2.0), 2.0);
  EXPECT_EQ(elu(-1e3), -1.0);
  EXPECT_EQ(elu(0.0), 0.0);
  EXPECT_EQ(sigmoid(0.0), 0.5);
}

TEST(Autoencoder, LayerDimensions) {
  const Autoencoder ae = Autoencoder::init(0);
  const std::vector<std::pair<Eigen::Index, Eigen::Index>> want = {{90, 111}, {85, 90}, {75, 85}, {90, 75}, {111, 90}};
  ASSERT_EQ(ae.net().layers().size(), want.size());
  for (std::size_t l = 0; l < want.size(); ++l) {
    EXPECT_EQ(ae.net().layers()[l].weights.rows(), want[l].first);
    EXPECT_EQ(ae.net().layers()[l].weights.cols(), want[l].second);
    EXPECT_EQ(ae.net().layers()[l].activation, kAutoencoderActivations[l]);
  }
  EXPECT_EQ(ae.code_width(), 75);
  EXPECT_EQ(ae.compression_ratio(), 75.0 / 111.0);
}

TEST(Autoencoder, InitIsDeterministicPerSeed) {
  EXPECT_TRUE(Autoencoder::init(3) == Autoencoder::init(3));
  EXPECT_FALSE(Autoencoder::init(3) == Autoencoder::init(4));
}

TEST(Autoencoder, ZeroWeightsGiveHalfEverywhere) {
  Autoencoder ae = Autoencoder::init(1);
  for (auto& layer : ae.net().layers()) {
    layer.weights.setZero();
    layer.bias.setZero();
  }
  const Eigen::VectorXd y = ae.forward(random_input(2, 111));
  for (Eigen::Index i = 0; i < y.size(); ++i) EXPECT_EQ(y(i), 0.5);
}

TEST(Autoencoder, ZeroWeightsCodeIsBottleneckBias) {
  Autoencoder ae = Autoencoder::init(1);
  Rng rng(9);
  for (auto& layer : ae.net().layers()) {
    layer.weights.setZero();
    layer.bias = testgen::uniform_matrix(rng, layer.outputs(), 1, -1.0, 1.0);
  }
  const Eigen::VectorXd code = ae.encode(random_input(3, 111));
  EXPECT_TRUE(code == ae.net().layers()[kBottleneckIndex - 1].bias);
}

TEST(Autoencoder, ForwardMatchesScalarOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Autoencoder ae = Autoencoder::init(seed);
    const Eigen::VectorXd x = random_input(seed + 100, 111);
    const Eigen::VectorXd y = ae.forward(x);
    const std::vector<double> want = oracle_forward(ae.net(), std::vector<double>(x.data(), x.data() + x.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) EXPECT_NEAR(y(i), want[static_cast<std::size_t>(i)], 1e-10);
  }
}

TEST(Autoencoder, EncodeDecodeComposesBitwise) {
  const Autoencoder ae = Autoencoder::init(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::VectorXd x = random_input(seed, 111);
    const Eigen::VectorXd code = ae.encode(x);
    EXPECT_EQ(code.size(), 75);
    EXPECT_TRUE(ae.decode(code) == ae.forward(x));
  }
}

TEST(Autoencoder, BatchForwardMatchesPerSample) {
  const Autoencoder ae = Autoencoder::init(2);
  Rng rng(4);
  const Eigen::MatrixXd rows = testgen::uniform_matrix(rng, 6, 111, 0.0, 1.0);
  const Eigen::MatrixXd out = ae.reconstruct_rows(rows);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const Eigen::VectorXd y = ae.forward(rows.row(r).transpose());
    EXPECT_LE((out.row(r).transpose() - y).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Autoencoder, RejectsWrongWidthAndNonFiniteInput) {
  const Autoencoder ae = Autoencoder::init(0);
  EXPECT_THROW(ae.forward(Eigen::VectorXd::Zero(110)), ValidationError);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(111);
  x(3) = std::nan("");
  EXPECT_THROW(ae.forward(x), ValidationError);
}

TEST(Training, MemorizesOneRepeatedVector) {
  Autoencoder ae = Autoencoder::init(1);
  const Eigen::VectorXd v = random_input(7, 111) * 0.8 + Eigen::VectorXd::Constant(111, 0.1);
  const Eigen::MatrixXd rows = v.transpose().replicate(64, 1);
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.seed = 1;
  const TrainResult r = ae_train(ae, rows, cfg);
  EXPECT_LT(r.loss_history.back(), 1e-4);
}

TEST(Training, ZeroLearningRateKeepsLossConstant) {
  Autoencoder ae = Autoencoder::init(1);
  Rng rng(3);
  const Eigen::MatrixXd rows = testgen::uniform_matrix(rng, 40, 111, 0.0, 1.0);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 5;
  const TrainResult r = ae_train(ae, rows, cfg);
  for (double l : r.loss_history) EXPECT_EQ(l, r.initial_loss);
}

TEST(Training, InvalidConfigIsRejected) {
  TrainConfig cfg;
  cfg.learning_rate = -1e-3;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Training, HugeLearningRateReportsDivergence) {
  const Eigen::Index widths[] = {2, 4, 1};
  const Activation acts[] = {Activation::Linear, Activation::Linear};
  DenseNet net = DenseNet::init(widths, acts, 0);
  Rng rng(1);
  const Eigen::MatrixXd x = testgen::uniform_matrix(rng, 32, 2, 0.0, 10.0);
  const Eigen::MatrixXd y = testgen::uniform_matrix(rng, 32, 1, 0.0, 10.0);
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::Sgd;
  cfg.learning_rate = 1e6;
  cfg.epochs = 50;
  EXPECT_THROW(train_dense(net, x, y, cfg), DivergenceError);
}

// SGD at learning rate 0.05 on scraped, normalized frames.
TEST(TrainingProperty, SgdLossDropsByEpochTen) {
  const auto topo = sdi::Topology::preset("paper");
  const sdi::TopologyState state(topo);
  const metrics::MetricCatalog cat = metrics::MetricCatalog::paper(topo, 7);
  metrics::TimeSeries w = metrics::generate_workload(metrics::WorkloadProfile::paper30min(7));
  w.timestamps.resize(256);
  w.values.resize(256);
  metrics::Dataset raw = metrics::scrape_series(state, w, cat);
  const auto [norm, scaler] = metrics::normalize_minmax(raw);
  const Eigen::MatrixXd rows = norm.select(metrics::Split::Training);
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Autoencoder ae = Autoencoder::init(seed);
    TrainConfig cfg;
    cfg.optimizer = OptimizerKind::Sgd;
    cfg.learning_rate = 0.05;
    cfg.epochs = 10;
    cfg.seed = seed;
    const TrainResult r = ae_train(ae, rows, cfg);
    if (r.loss_history.back() < r.initial_loss) ++improved;
  }
  EXPECT_GE(improved, 19);
}

TEST(ErrorDistribution, PerfectReconstruction) {
  const auto s = series({1, 2, 3, 4});
  EXPECT_EQ(relative_error_distribution(s, s, 0.1).fraction_below, 1.0);
}

TEST(ErrorDistribution, ArithmeticExample) {
  const ErrorDistribution d = relative_error_distribution(series({10, 10}), series({9, 12}), 0.1);
  ASSERT_EQ(d.eta.size(), 2u);
  EXPECT_NEAR(d.eta[0], 0.1, 1e-15);
  EXPECT_NEAR(d.eta[1], -0.2, 1e-15);
  EXPECT_EQ(d.fraction_below, 0.0);
}

TEST(ErrorDistribution, LengthMismatchIsRejected) {
  EXPECT_THROW(relative_error_distribution(series({1, 2}), series({1}), 0.1), ValidationError);
}

TEST(ErrorDistributionProperty, MatchesDirectRecount) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    std::vector<double> real(200), recon(200);
    for (std::size_t i = 0; i < real.size(); ++i) {
      real[i] = rng.uniform() < 0.05 ? 0.0 : rng.uniform(-50, 50);
      recon[i] = real[i] * (1.0 + rng.normal(0.0, 0.12));
    }
    const double threshold = rng.uniform(0.01, 0.3);
    const ErrorDistribution d = relative_error_distribution(series(real), series(recon), threshold);
    std::size_t included = 0, below = 0, in_bins = 0;
    for (std::size_t i = 0; i < real.size(); ++i) {
      if (std::abs(real[i]) < 1e-6) continue;
      ++included;
      const double eta = (real[i] - recon[i]) / real[i];
      if (std::abs(eta) < threshold) ++below;
      if (eta >= -0.5 && eta < 0.5) ++in_bins;
    }
    EXPECT_EQ(d.included, included);
    EXPECT_EQ(d.fraction_below, static_cast<double>(below) / static_cast<double>(included));
    std::size_t counted = 0;
    for (std::size_t c : d.histogram.counts) counted += c;
    EXPECT_EQ(counted, in_bins);
    EXPECT_EQ(counted + d.histogram.underflow + d.histogram.overflow, included);
  }
}

TEST(LinearFit, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  const LinearModel m = linfit(x, y);
  EXPECT_NEAR(m.slope, 2.0, 1e-12);
  EXPECT_NEAR(m.intercept, 1.0, 1e-12);
  EXPECT_NEAR(m.fit_mse, 0.0, 1e-24);
}

TEST(LinearFit, TwoPointsInterpolate) {
  const std::vector<double> x{1, 3}, y{5, -1};
  const LinearModel m = linfit(x, y);
  EXPECT_NEAR(lin_predict(m, 1), 5.0, 1e-12);
  EXPECT_NEAR(lin_predict(m, 3), -1.0, 1e-12);
  EXPECT_NEAR(m.fit_mse, 0.0, 1e-24);
}

TEST(LinearFit, DegenerateInputsAreRejected) {
  const std::vector<double> one{1}, c{2, 2, 2}, y{1, 2, 3};
  EXPECT_THROW(linfit(one, one), ValidationError);
  EXPECT_THROW(linfit(c, y), ValidationError);
}

TEST(LinearFit, PlantedRelationRecovered) {
  Rng rng(42);
  std::vector<double> x(1000), y(1000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform();
    y[i] = 0.7 * x[i] + 0.1 + rng.normal(0.0, 1e-3);
  }
  const LinearModel m = linfit(x, y);
  EXPECT_LT(std::abs(m.slope - 0.7) / 0.7, 0.01);
  EXPECT_LT(m.fit_mse, 1e-5);
}

TEST(LinearFitProperty, PerturbationNeverImproves) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-5, 5);
      y[i] = rng.uniform(-2, 2) * x[i] + rng.normal();
    }
    const LinearModel m = linfit(x, y);
    const double base = line_mse(m.slope, m.intercept, x, y);
    for (double ds : {-1e-3, 0.0, 1e-3}) {
      for (double di : {-1e-3, 0.0, 1e-3}) {
        EXPECT_GE(line_mse(m.slope + ds, m.intercept + di, x, y), base * (1 - 1e-12)) << seed;
      }
    }
  }
}

TEST(Recurrent, ConstantSeriesIsAFixedPoint) {
  const std::vector<double> flat(200, 42.0);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 30;
  const RecurrentTrainResult r = rnn_train(flat, 12, 3, cfg, 8);
  for (double f : rnn_predict(r.model, std::span(flat).first(12))) EXPECT_NEAR(f, 42.0, 0.05 * 42.0);
  // The cell itself has learned the scaled constant, not just the unscale rule.
  const Eigen::MatrixXd y = lstm_forward(r.model, Eigen::MatrixXd::Constant(12, 1, 0.5));
  for (Eigen::Index k = 0; k < y.rows(); ++k) EXPECT_NEAR(y(k, 0), 0.5, 0.05 * 0.5);
}

TEST(Recurrent, SinusoidBeatsPersistence) {
  std::vector<double> s(600);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 10.0 + 5.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 25.0);
  const std::size_t n_train = 480, window = 20;
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 30;
  const RecurrentTrainResult r = rnn_train(std::span(s).first(n_train), window, 1, cfg, 8);
  double se_model = 0, se_persist = 0;
  for (std::size_t t = n_train; t < s.size(); ++t) {
    const double f = rnn_predict(r.model, std::span(s).subspan(t - window, window))[0];
    se_model += (f - s[t]) * (f - s[t]);
    se_persist += (s[t - 1] - s[t]) * (s[t - 1] - s[t]);
  }
  EXPECT_LT(se_model, se_persist);
}

TEST(Recurrent, ShortSeriesIsRejected) {
  const std::vector<double> s(10, 1.0);
  EXPECT_THROW(rnn_train(s, 8, 2, TrainConfig{}, 4), ValidationError);
}

TEST(Recurrent, WindowsAreScaledSlices) {
  RecurrentModel m = RecurrentModel::init(4, 3, 2, 0);
  m.series_min = 0;
  m.series_max = 10;
  const std::vector<double> s{0, 1, 2, 3, 4, 5, 6};
  Eigen::MatrixXd in, out;
  make_windows(m, s, in, out);
  ASSERT_EQ(in.cols(), 3);
  EXPECT_EQ(in(0, 1), 0.1);
  EXPECT_EQ(out(1, 2), 0.6);
}

TEST(ModelIo, AutoencoderRoundTripIsBitExact) {
  const Autoencoder ae = Autoencoder::init(11);
  TrainConfig cfg;
  cfg.seed = 11;
  cfg.learning_rate = 0.002;
  TrainConfig back_cfg;
  const Autoencoder back = parse_autoencoder(render_autoencoder(ae, cfg), &back_cfg);
  EXPECT_TRUE(back == ae);
  EXPECT_EQ(back_cfg.learning_rate, 0.002);
  EXPECT_EQ(back_cfg.seed, 11u);
}

TEST(ModelIo, RecurrentRoundTripIsBitExact) {
  RecurrentModel m = RecurrentModel::init(5, 7, 3, 2);
  m.series_min = -1.25;
  m.series_max = 3.0 / 7.0;
  EXPECT_EQ(parse_recurrent(render_recurrent(m, {})), m);
}

TEST(ModelIo, WrongKindAndMalformedTextAreRejected) {
  const std::string rec = render_recurrent(RecurrentModel::init(2, 3, 1, 0), {});
  EXPECT_THROW(parse_autoencoder(rec), ValidationError);
  EXPECT_THROW(parse_autoencoder("{not json"), ParseError);
}
