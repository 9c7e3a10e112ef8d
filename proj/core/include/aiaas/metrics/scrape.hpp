#pragma once

#include <vector>

#include "aiaas/metrics/catalog.hpp"
#include "aiaas/metrics/dataset.hpp"
#include "aiaas/metrics/workload.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::metrics {

struct MetricFrame {
  double timestamp = 0.0;
  std::vector<double> values;  // one per catalog entry, catalog order

  friend bool operator==(const MetricFrame&, const MetricFrame&) = default;
};

/// Workload fractions seen by each node: traffic it forwards or terminates
/// (through), receives, and transmits.
struct TrafficShares {
  std::vector<double> through;
  std::vector<double> receive;
  std::vector<double> transmit;
};

/// Routes every catalog flow over the topology and accumulates shares.
TrafficShares traffic_shares(const sdi::Topology& topology, const std::vector<Flow>& flows);

/// One frame of the catalog at time t. A pure function of its arguments:
/// noise is derived from (catalog seed, t), never from hidden state.
MetricFrame scrape(const sdi::TopologyState& state, double workload_value,
                   const MetricCatalog& catalog, double t);

/// Scrapes one frame per workload sample into a dataset (all rows tagged
/// training; split afterwards).
Dataset scrape_series(const sdi::TopologyState& state, const TimeSeries& workload,
                      const MetricCatalog& catalog);

}  // namespace aiaas::metrics
