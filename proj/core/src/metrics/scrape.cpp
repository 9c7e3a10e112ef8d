#include "aiaas/metrics/scrape.hpp"

#include <algorithm>
#include <cmath>

#include "aiaas/common/random.hpp"

namespace aiaas::metrics {

TrafficShares traffic_shares(const sdi::Topology& topology, const std::vector<Flow>& flows) {
  const std::size_t n = topology.size();
  TrafficShares s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (const Flow& f : flows) {
    const sdi::PathMetrics& route = topology.route(f.src, f.dst);
    for (std::size_t k = 0; k < route.nodes.size(); ++k) {
      const std::size_t idx = topology.require_index(route.nodes[k]);
      s.through[idx] += f.share;
      if (k > 0) s.receive[idx] += f.share;
      if (k + 1 < route.nodes.size()) s.transmit[idx] += f.share;
    }
  }
  return s;
}

MetricFrame scrape(const sdi::TopologyState& state, double workload_value, const MetricCatalog& catalog,
                   double t) {
  const sdi::Topology& topo = state.topology();
  const TrafficShares shares = traffic_shares(topo, catalog.flows());
  const auto t_key = static_cast<std::uint64_t>(std::llround(t * 1000.0));
  const std::uint64_t seed = catalog.noise_seed();

  std::vector<double> factors(catalog.latent_factors());
  for (std::size_t k = 0; k < factors.size(); ++k) factors[k] = hash_normal(seed, t_key, k, 0);

  MetricFrame frame;
  frame.timestamp = t;
  frame.values.reserve(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const MetricSpec& m = catalog.entries()[i];
    const std::size_t host = topo.require_index(m.host);
    double share = 0.0;
    switch (m.coupling_kind) {
      case Coupling::Through: share = shares.through[host]; break;
      case Coupling::Receive: share = shares.receive[host]; break;
      case Coupling::Transmit: share = shares.transmit[host]; break;
    }
    double noise = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) noise += m.loadings[k] * factors[k];
    noise = catalog.common_noise() * noise + m.idiosyncratic * hash_normal(seed, t_key, 1000 + i, 1);

    double reserved = 0.0;
    const std::int64_t cap = topo.nodes()[host].cpu_capacity;
    if (m.reserved_gain != 0.0 && cap > 0) {
      reserved = m.reserved_gain * static_cast<double>(state.allocated(host).cpu) / static_cast<double>(cap);
    }
    double v = m.baseline + reserved + m.coupling * share * workload_value * (1.0 + noise);
    if (m.ceiling > 0.0) v = std::min(v, m.ceiling);
    frame.values.push_back(std::max(0.0, v));
  }
  return frame;
}

Dataset scrape_series(const sdi::TopologyState& state, const TimeSeries& workload,
                      const MetricCatalog& catalog) {
  workload.validate();
  Dataset ds;
  ds.columns = catalog.column_names();
  ds.timestamps = workload.timestamps;
  ds.values.resize(static_cast<Eigen::Index>(workload.size()), static_cast<Eigen::Index>(catalog.size()));
  for (std::size_t r = 0; r < workload.size(); ++r) {
    const MetricFrame f = scrape(state, workload.values[r], catalog, workload.timestamps[r]);
    for (std::size_t c = 0; c < f.values.size(); ++c) {
      ds.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f.values[c];
    }
  }
  ds.splits.assign(ds.rows(), Split::Training);
  return ds;
}

}  // namespace aiaas::metrics
