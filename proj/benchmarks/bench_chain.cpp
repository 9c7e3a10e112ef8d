#include <benchmark/benchmark.h>

#include <vector>

#include "aiaas/chain/embedding.hpp"
#include "generators.hpp"

using namespace aiaas;

namespace {

struct Instance {
  sdi::Topology topology;
  sdi::TopologyState state;
  chain::MklChain chain;
};

std::vector<Instance> instances(std::size_t count) {
  std::vector<Instance> out;
  for (std::uint64_t seed = 0; seed < count; ++seed) {
    Rng rng(seed);
    sdi::Topology topo = sdi::Topology::build(testgen::random_topology(rng));
    sdi::TopologyState st = testgen::random_loaded_state(rng, topo, static_cast<int>(rng.below(3)));
    chain::MklChain c = testgen::random_chain(rng, topo);
    out.push_back({std::move(topo), std::move(st), std::move(c)});
  }
  return out;
}

}  // namespace

static void BM_EmbedGreedy(benchmark::State& state) {
  auto set = instances(64);
  std::size_t i = 0;
  for (auto _ : state) {
    Instance& in = set[i++ % set.size()];
    benchmark::DoNotOptimize(chain::embed(in.chain, in.state, {100000, {}, false}));
  }
}
BENCHMARK(BM_EmbedGreedy);

static void BM_EmbedBruteforce(benchmark::State& state) {
  const auto set = instances(64);
  std::size_t i = 0;
  for (auto _ : state) {
    const Instance& in = set[i++ % set.size()];
    benchmark::DoNotOptimize(chain::embed_bruteforce(in.chain, in.state));
  }
}
BENCHMARK(BM_EmbedBruteforce);
