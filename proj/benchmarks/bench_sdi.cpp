#include <benchmark/benchmark.h>

#include "aiaas/sdi/topology.hpp"
#include "aiaas/sdi/topology_state.hpp"

using namespace aiaas;

static void BM_PaperTopologyBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sdi::Topology::preset("paper"));
}
BENCHMARK(BM_PaperTopologyBuild);

static void BM_RouteLookup(benchmark::State& state) {
  const sdi::Topology topo = sdi::Topology::preset("paper");
  const std::size_t n = topo.size();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(topo.route(i % n, (i * 7 + 3) % n));
    ++i;
  }
}
BENCHMARK(BM_RouteLookup);

static void BM_StateSerializeRoundTrip(benchmark::State& state) {
  sdi::TopologyState st(sdi::Topology::preset("paper"));
  for (auto _ : state) benchmark::DoNotOptimize(sdi::TopologyState::deserialize(st.serialize()));
}
BENCHMARK(BM_StateSerializeRoundTrip);

BENCHMARK_MAIN();
