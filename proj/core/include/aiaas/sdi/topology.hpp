#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aiaas/sdi/resources.hpp"

namespace aiaas::sdi {

enum class Tier { Core, Edge, Access };

std::string_view to_string(Tier tier);
Tier parse_tier(std::string_view text);
/// Distance from the end-to-end tier: Core 0, Edge 1, Access 2.
int tier_depth(Tier tier);

struct ComputeNode {
  std::string id;
  std::string region;
  Tier tier = Tier::Edge;
  std::int64_t cpu_capacity = 0;      // millicores
  std::int64_t mem_capacity = 0;      // MiB
  std::int64_t storage_capacity = 0;  // MiB
  double reliability = 1.0;
  bool is_switch = false;

  friend bool operator==(const ComputeNode&, const ComputeNode&) = default;
};

struct Link {
  std::string a;
  std::string b;
  std::int64_t bandwidth = 0;  // Mb/s
  double latency_ms = 0.0;
  double reliability = 1.0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Switches are listed separately and always carry zero compute capacity.
struct SwitchDecl {
  std::string id;
  std::string region;
  Tier tier = Tier::Core;

  friend bool operator==(const SwitchDecl&, const SwitchDecl&) = default;
};

struct TopologySpec {
  std::vector<std::string> regions;
  std::vector<ComputeNode> nodes;
  std::vector<Link> links;
  std::vector<SwitchDecl> switches;

  friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

inline constexpr std::int64_t kUnboundedBandwidth = std::numeric_limits<std::int64_t>::max();

/// Metrics of the route between two nodes. The route is the minimum-latency
/// path; ties go to the lexicographically smallest node-id sequence.
struct PathMetrics {
  double latency_ms = 0.0;
  std::int64_t min_bandwidth = kUnboundedBandwidth;  // unbounded when src == dst
  double reliability = 1.0;
  std::vector<std::string> nodes;  // src ... dst
  std::vector<std::size_t> links;  // indices into Topology::links()
};

class Topology {
 public:
  struct Adjacent {
    std::size_t node;
    std::size_t link;
  };

  /// Validates the spec and precomputes all-pairs routes.
  /// Throws ValidationError on duplicate ids, dangling link endpoints,
  /// out-of-range attributes, or a disconnected graph.
  static Topology build(TopologySpec spec);

  /// Built-in topologies: "paper" (16 VMs + 9 switches over Core, Toronto,
  /// Waterloo, Calgary), "single", "line3".
  static Topology preset(std::string_view name);

  const TopologySpec& spec() const { return spec_; }
  /// Compute nodes followed by switches, in declaration order.
  const std::vector<ComputeNode>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return spec_.links; }
  std::size_t size() const { return nodes_.size(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  /// Throws NotFoundError for unknown ids.
  std::size_t require_index(std::string_view id) const;
  const ComputeNode& node(std::string_view id) const { return nodes_[require_index(id)]; }

  std::span<const Adjacent> neighbors(std::size_t index) const { return adjacency_[index]; }

  /// Capacity vector of a node. The bandwidth component is the sum of its
  /// incident link bandwidths.
  ResourceVector capacity(std::size_t index) const;

  /// Non-switch node ids, sorted.
  std::vector<std::string> compute_node_ids() const;
  std::vector<std::string> nodes_in_region(std::string_view region) const;

  /// Route between two nodes. Throws NotFoundError for unknown ids.
  const PathMetrics& route(std::string_view src, std::string_view dst) const;
  const PathMetrics& route(std::size_t src, std::size_t dst) const {
    return routes_[src * nodes_.size() + dst];
  }

  friend bool operator==(const Topology& a, const Topology& b) { return a.spec_ == b.spec_; }

 private:
  explicit Topology(TopologySpec spec);
  void compute_routes();

  TopologySpec spec_;
  std::vector<ComputeNode> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::vector<PathMetrics> routes_;
};

/// Convenience wrapper over Topology::route returning the metrics by value.
PathMetrics path_metrics(const Topology& topology, std::string_view src, std::string_view dst);

}  // namespace aiaas::sdi
