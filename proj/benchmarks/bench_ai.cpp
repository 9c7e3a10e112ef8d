#include <benchmark/benchmark.h>

#include "aiaas/ai/autoencoder.hpp"
#include "aiaas/common/random.hpp"

using namespace aiaas;

static void BM_AutoencoderForward(benchmark::State& state) {
  const ai::Autoencoder ae = ai::Autoencoder::init(7);
  Rng rng(1);
  Eigen::VectorXd x(ae.input_width());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(ae.forward(x));
}
BENCHMARK(BM_AutoencoderForward);

static void BM_AutoencoderBatch(benchmark::State& state) {
  const ai::Autoencoder ae = ai::Autoencoder::init(7);
  Rng rng(2);
  Eigen::MatrixXd rows(state.range(0), ae.input_width());
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    for (Eigen::Index c = 0; c < rows.cols(); ++c) rows(r, c) = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(ae.reconstruct_rows(rows));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AutoencoderBatch)->Arg(64)->Arg(1800);
