#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aiaas/sdi/topology.hpp"

namespace aiaas::metrics {

/// The nine monitored families, in catalog order.
inline constexpr std::string_view kMetricFamilies[] = {
    "node.cpu",
    "node.network.receive",
    "node.network.transmit",
    "container.memory.usage",
    "http.request.size",
    "http.request.duration",
    "container.cpu.system",
    "container.network.receive",
    "container.network.transmit",
};

/// A family plus the entity it is measured on. Column names render as
/// "family@scope", e.g. "node.cpu@waterloo-vm6".
struct MetricName {
  std::string family;
  std::string scope;

  std::string full() const { return family + "@" + scope; }
  static MetricName parse(std::string_view full_name);
  friend bool operator==(const MetricName&, const MetricName&) = default;
};

/// Which traffic share drives a metric.
enum class Coupling { Through, Receive, Transmit };

/// One catalog column with its response function
///
///   value = min(ceiling, baseline + reserved_gain * reserved_cpu_fraction
///                        + coupling * share * workload * (1 + noise))
///
/// where `share` is the fraction of workload crossing `host` (per the
/// coupling kind) and `noise` combines shared latent factors with an
/// idiosyncratic term.
struct MetricSpec {
  MetricName name;
  std::string host;  // topology node the metric is measured on
  Coupling coupling_kind = Coupling::Through;
  double baseline = 0.0;
  double coupling = 0.0;
  double reserved_gain = 0.0;
  double ceiling = 0.0;  // 0 means unbounded
  std::vector<double> loadings;  // one per latent factor
  double idiosyncratic = 0.0;
};

/// A traffic flow between two nodes carrying `share` of the workload along
/// the topology route.
struct Flow {
  std::string src;
  std::string dst;
  double share = 0.0;
};

class MetricCatalog {
 public:
  MetricCatalog() = default;
  MetricCatalog(std::vector<MetricSpec> entries, std::vector<Flow> flows, std::uint64_t noise_seed,
                double common_noise);

  /// Expands the nine families over the "paper" topology: node families on
  /// all 25 VMs (75), container families on the HAProxy, firewall and web
  /// containers (7 x 4 = 28), http families on the HAProxy and web
  /// endpoints (4 x 2 = 8). Width 111.
  static MetricCatalog paper(const sdi::Topology& topology, std::uint64_t seed);

  std::size_t size() const { return entries_.size(); }
  const std::vector<MetricSpec>& entries() const { return entries_; }
  const std::vector<Flow>& flows() const { return flows_; }
  std::uint64_t noise_seed() const { return noise_seed_; }
  double common_noise() const { return common_noise_; }
  std::size_t latent_factors() const;

  std::vector<std::string> column_names() const;
  std::optional<std::size_t> index_of(std::string_view full_name) const;

 private:
  std::vector<MetricSpec> entries_;
  std::vector<Flow> flows_;
  std::uint64_t noise_seed_ = 0;
  double common_noise_ = 0.0;
};

/// Column the compression scenario scores: CPU of the Waterloo web server.
inline constexpr std::string_view kDesignatedCpuMetric = "node.cpu@waterloo-vm6";

}  // namespace aiaas::metrics
