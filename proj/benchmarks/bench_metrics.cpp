#include <benchmark/benchmark.h>

#include "aiaas/metrics/catalog.hpp"
#include "aiaas/metrics/scrape.hpp"
#include "aiaas/metrics/workload.hpp"

using namespace aiaas;

static void BM_ScrapeFrame(benchmark::State& state) {
  const sdi::TopologyState st(sdi::Topology::preset("paper"));
  const metrics::MetricCatalog cat = metrics::MetricCatalog::paper(st.topology(), 7);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::scrape(st, 50.0, cat, t));
    t += 1.0;
  }
}
BENCHMARK(BM_ScrapeFrame);

static void BM_ScrapeSeries(benchmark::State& state) {
  const sdi::TopologyState st(sdi::Topology::preset("paper"));
  const metrics::MetricCatalog cat = metrics::MetricCatalog::paper(st.topology(), 7);
  const metrics::TimeSeries w = metrics::generate_workload(metrics::WorkloadProfile::paper30min(7));
  for (auto _ : state) benchmark::DoNotOptimize(metrics::scrape_series(st, w, cat));
}
BENCHMARK(BM_ScrapeSeries)->Unit(benchmark::kMillisecond);
