#include "aiaas/sdi/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aiaas/common/error.hpp"

namespace aiaas::sdi {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Core: return "core";
    case Tier::Edge: return "edge";
    case Tier::Access: return "access";
  }
  return "edge";
}

Tier parse_tier(std::string_view text) {
  if (text == "core" || text == "Core") return Tier::Core;
  if (text == "edge" || text == "Edge") return Tier::Edge;
  if (text == "access" || text == "Access") return Tier::Access;
  throw ValidationError("unknown tier '" + std::string(text) + "'");
}

int tier_depth(Tier tier) {
  switch (tier) {
    case Tier::Core: return 0;
    case Tier::Edge: return 1;
    case Tier::Access: return 2;
  }
  return 1;
}

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void check_node(const ComputeNode& n) {
  if (n.id.empty()) throw ValidationError("node with empty id");
  if (n.cpu_capacity < 0 || n.mem_capacity < 0 || n.storage_capacity < 0) {
    throw ValidationError("node '" + n.id + "': negative capacity");
  }
  if (!is_probability(n.reliability)) {
    throw ValidationError("node '" + n.id + "': reliability outside [0,1]");
  }
}

void check_link(const Link& l) {
  const std::string name = l.a + "--" + l.b;
  if (l.a == l.b) throw ValidationError("link " + name + ": endpoints must be distinct");
  if (l.bandwidth <= 0) throw ValidationError("link " + name + ": bandwidth must be > 0");
  if (!std::isfinite(l.latency_ms) || l.latency_ms < 0.0) {
    throw ValidationError("link " + name + ": latency must be >= 0");
  }
  if (!is_probability(l.reliability)) {
    throw ValidationError("link " + name + ": reliability outside [0,1]");
  }
}

}  // namespace

Topology::Topology(TopologySpec spec) : spec_(std::move(spec)) {}

Topology Topology::build(TopologySpec spec) {
  Topology t(std::move(spec));
  const TopologySpec& s = t.spec_;

  std::set<std::string, std::less<>> regions(s.regions.begin(), s.regions.end());
  auto check_region = [&](const std::string& id, const std::string& region) {
    if (!regions.empty() && !regions.contains(region)) {
      throw ValidationError("node '" + id + "': undeclared region '" + region + "'");
    }
  };

  for (const ComputeNode& n : s.nodes) {
    check_node(n);
    if (n.is_switch) throw ValidationError("node '" + n.id + "': declare switches under 'switches'");
    check_region(n.id, n.region);
    t.nodes_.push_back(n);
  }
  for (const SwitchDecl& sw : s.switches) {
    if (sw.id.empty()) throw ValidationError("switch with empty id");
    check_region(sw.id, sw.region);
    ComputeNode n;
    n.id = sw.id;
    n.region = sw.region;
    n.tier = sw.tier;
    n.is_switch = true;
    t.nodes_.push_back(std::move(n));
  }
  if (t.nodes_.empty()) throw ValidationError("topology has no nodes");

  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    auto [it, inserted] = t.index_.emplace(t.nodes_[i].id, i);
    if (!inserted) throw ValidationError("duplicate node id '" + t.nodes_[i].id + "'");
  }

  t.adjacency_.assign(t.nodes_.size(), {});
  for (std::size_t li = 0; li < s.links.size(); ++li) {
    const Link& l = s.links[li];
    check_link(l);
    auto a = t.index_of(l.a);
    auto b = t.index_of(l.b);
    if (!a) throw ValidationError("link " + l.a + "--" + l.b + ": dangling endpoint '" + l.a + "'");
    if (!b) throw ValidationError("link " + l.a + "--" + l.b + ": dangling endpoint '" + l.b + "'");
    t.adjacency_[*a].push_back({*b, li});
    t.adjacency_[*b].push_back({*a, li});
  }

  // Connectivity check by flood fill from node 0.
  std::vector<bool> seen(t.nodes_.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (const Adjacent& adj : t.adjacency_[u]) {
      if (!seen[adj.node]) {
        seen[adj.node] = true;
        ++reached;
        stack.push_back(adj.node);
      }
    }
  }
  if (reached != t.nodes_.size()) {
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        throw ValidationError("disconnected graph: '" + t.nodes_[i].id + "' unreachable from '" +
                              t.nodes_[0].id + "'");
      }
    }
  }

  t.compute_routes();
  return t;
}

std::optional<std::size_t> Topology::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Topology::require_index(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) throw NotFoundError("unknown node '" + std::string(id) + "'");
  return *idx;
}

ResourceVector Topology::capacity(std::size_t index) const {
  const ComputeNode& n = nodes_[index];
  ResourceVector cap{n.cpu_capacity, n.mem_capacity, n.storage_capacity, 0};
  for (const Adjacent& adj : adjacency_[index]) cap.bandwidth += spec_.links[adj.link].bandwidth;
  return cap;
}

std::vector<std::string> Topology::compute_node_ids() const {
  std::vector<std::string> ids;
  for (const ComputeNode& n : nodes_) {
    if (!n.is_switch) ids.push_back(n.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> Topology::nodes_in_region(std::string_view region) const {
  std::vector<std::string> ids;
  for (const ComputeNode& n : nodes_) {
    if (n.region == region) ids.push_back(n.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

const PathMetrics& Topology::route(std::string_view src, std::string_view dst) const {
  return route(require_index(src), require_index(dst));
}

// Label-setting search keyed on (latency, node-id sequence). Extending a
// path never decreases its key, so the first settled label of each node is
// its minimum-latency, lexicographically smallest route.
void Topology::compute_routes() {
  const std::size_t n = nodes_.size();
  routes_.assign(n * n, PathMetrics{});
  for (std::size_t src = 0; src < n; ++src) {
    struct Label {
      double latency = 0.0;
      std::vector<std::string> ids;
      std::vector<std::size_t> links;
      bool valid = false;
    };
    std::vector<Label> best(n);
    std::vector<bool> done(n, false);
    best[src].valid = true;
    best[src].ids = {nodes_[src].id};

    auto less = [](const Label& a, const Label& b) {
      if (a.latency != b.latency) return a.latency < b.latency;
      return a.ids < b.ids;
    };

    for (;;) {
      std::size_t u = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i] || !best[i].valid) continue;
        if (u == n || less(best[i], best[u])) u = i;
      }
      if (u == n) break;
      done[u] = true;
      for (const Adjacent& adj : adjacency_[u]) {
        if (done[adj.node]) continue;
        Label cand;
        cand.valid = true;
        cand.latency = best[u].latency + spec_.links[adj.link].latency_ms;
        cand.ids = best[u].ids;
        cand.ids.push_back(nodes_[adj.node].id);
        cand.links = best[u].links;
        cand.links.push_back(adj.link);
        if (!best[adj.node].valid || less(cand, best[adj.node])) best[adj.node] = std::move(cand);
      }
    }

    for (std::size_t dst = 0; dst < n; ++dst) {
      PathMetrics& pm = routes_[src * n + dst];
      pm.latency_ms = best[dst].latency;
      pm.nodes = best[dst].ids;
      pm.links = best[dst].links;
      pm.min_bandwidth = kUnboundedBandwidth;
      pm.reliability = 1.0;
      for (std::size_t li : pm.links) {
        pm.min_bandwidth = std::min(pm.min_bandwidth, spec_.links[li].bandwidth);
        pm.reliability *= spec_.links[li].reliability;
      }
    }
  }
}

PathMetrics path_metrics(const Topology& topology, std::string_view src, std::string_view dst) {
  const PathMetrics& pm = topology.route(src, dst);
  if (pm.nodes.empty()) {
    throw NotFoundError("no route from '" + std::string(src) + "' to '" + std::string(dst) + "'");
  }
  return pm;
}

}  // namespace aiaas::sdi
