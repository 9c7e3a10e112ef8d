#include "aiaas/metrics/catalog.hpp"

#include "aiaas/common/error.hpp"
#include "aiaas/common/random.hpp"

namespace aiaas::metrics {

namespace {

constexpr std::size_t kLatentFactors = 4;

struct FamilyResponse {
  Coupling kind;
  double baseline;
  double coupling;
  double reserved_gain;
  double ceiling;
};

// Per-request response of each family. Units: percent, bytes/s, MiB, bytes,
// seconds.
FamilyResponse family_response(std::string_view family, bool is_switch) {
  if (family == "node.cpu") return {Coupling::Through, 4.0, is_switch ? 0.2 : 0.6, 10.0, 100.0};
  if (family == "node.network.receive") return {Coupling::Receive, 2.0e3, 2.2e4, 0.0, 0.0};
  if (family == "node.network.transmit") return {Coupling::Transmit, 2.0e3, 2.2e4, 0.0, 0.0};
  if (family == "container.memory.usage") return {Coupling::Through, 180.0, 0.8, 0.0, 0.0};
  if (family == "http.request.size") return {Coupling::Receive, 480.0, 1.5, 0.0, 0.0};
  if (family == "http.request.duration") return {Coupling::Through, 0.015, 4.0e-4, 0.0, 0.0};
  if (family == "container.cpu.system") return {Coupling::Through, 1.0, 0.25, 0.0, 100.0};
  if (family == "container.network.receive") return {Coupling::Receive, 500.0, 2.0e4, 0.0, 0.0};
  if (family == "container.network.transmit") return {Coupling::Transmit, 500.0, 2.0e4, 0.0, 0.0};
  throw ValidationError("unknown metric family '" + std::string(family) + "'");
}

}  // namespace

MetricName MetricName::parse(std::string_view full_name) {
  const auto at = full_name.find('@');
  if (at == std::string_view::npos || at == 0 || at + 1 == full_name.size()) {
    throw ValidationError("metric name '" + std::string(full_name) + "' is not family@scope");
  }
  return {std::string(full_name.substr(0, at)), std::string(full_name.substr(at + 1))};
}

MetricCatalog::MetricCatalog(std::vector<MetricSpec> entries, std::vector<Flow> flows,
                             std::uint64_t noise_seed, double common_noise)
    : entries_(std::move(entries)),
      flows_(std::move(flows)),
      noise_seed_(noise_seed),
      common_noise_(common_noise) {
  std::vector<std::string> names = column_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) throw ValidationError("duplicate metric '" + names[i] + "'");
    }
  }
}

std::size_t MetricCatalog::latent_factors() const {
  return entries_.empty() ? 0 : entries_.front().loadings.size();
}

std::vector<std::string> MetricCatalog::column_names() const {
  std::vector<std::string> names;
  names.reserve(entries_.size());
  for (const MetricSpec& m : entries_) names.push_back(m.name.full());
  return names;
}

std::optional<std::size_t> MetricCatalog::index_of(std::string_view full_name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name.full() == full_name) return i;
  }
  return std::nullopt;
}

MetricCatalog MetricCatalog::paper(const sdi::Topology& topology, std::uint64_t seed) {
  const char* regions[] = {"toronto", "waterloo", "calgary"};
  const double region_weight[] = {0.40, 0.35, 0.25};

  // HAProxy in the core balances requests over the regional web servers;
  // regional clients reach the web server through the firewall; every VM
  // ships telemetry to its region's Prometheus host (VM 3, core VM 2).
  std::vector<Flow> flows;
  for (int r = 0; r < 3; ++r) {
    const std::string reg = regions[r];
    flows.push_back({"core-vm1", reg + "-vm6", region_weight[r]});
    flows.push_back({reg + "-vm5", reg + "-vm4", 0.2 * region_weight[r]});
    flows.push_back({reg + "-vm4", reg + "-vm6", 0.2 * region_weight[r]});
  }
  for (const sdi::ComputeNode& n : topology.nodes()) {
    if (n.is_switch) continue;
    const std::string sink = n.region == "core" ? "core-vm2" : n.region + "-vm3";
    if (n.id != sink) flows.push_back({n.id, sink, 0.01});
  }
  for (const Flow& f : flows) {
    topology.require_index(f.src);
    topology.require_index(f.dst);
  }

  Rng rng(seed ^ 0x6d6574726963ULL);
  auto jitter = [&rng] { return rng.uniform(0.8, 1.2); };
  auto make = [&](std::string family, std::string scope, std::string host, bool is_switch) {
    const FamilyResponse fr = family_response(family, is_switch);
    MetricSpec m;
    m.name = {std::move(family), std::move(scope)};
    m.host = std::move(host);
    m.coupling_kind = fr.kind;
    m.baseline = fr.baseline * jitter();
    m.coupling = fr.coupling * jitter();
    m.reserved_gain = fr.reserved_gain;
    m.ceiling = fr.ceiling;
    m.loadings.resize(kLatentFactors);
    for (double& l : m.loadings) l = rng.uniform(-1.0, 1.0);
    m.idiosyncratic = 0.01;
    return m;
  };

  std::vector<MetricSpec> entries;
  std::vector<const sdi::ComputeNode*> vms;
  for (const sdi::ComputeNode& n : topology.nodes()) vms.push_back(&n);

  for (std::string_view fam : {kMetricFamilies[0], kMetricFamilies[1], kMetricFamilies[2]}) {
    for (const sdi::ComputeNode* n : vms) entries.push_back(make(std::string(fam), n->id, n->id, n->is_switch));
  }

  struct Container {
    std::string name;
    std::string host;
    bool http;
  };
  std::vector<Container> containers{{"haproxy", "core-vm1", true}};
  for (const char* reg : regions) {
    containers.push_back({std::string("snort-") + reg, std::string(reg) + "-vm4", false});
    containers.push_back({std::string("web-") + reg, std::string(reg) + "-vm6", true});
  }

  entries.reserve(111);
  for (const Container& c : containers) entries.push_back(make("container.memory.usage", c.name, c.host, false));
  for (const Container& c : containers) {
    if (c.http) entries.push_back(make("http.request.size", c.name, c.host, false));
  }
  for (const Container& c : containers) {
    if (c.http) entries.push_back(make("http.request.duration", c.name, c.host, false));
  }
  for (std::string_view fam : {kMetricFamilies[6], kMetricFamilies[7], kMetricFamilies[8]}) {
    for (const Container& c : containers) entries.push_back(make(std::string(fam), c.name, c.host, false));
  }

  return MetricCatalog(std::move(entries), std::move(flows), seed, 0.04);
}

}  // namespace aiaas::metrics
