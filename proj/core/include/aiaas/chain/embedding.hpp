#pragma once

// Placement of a chain onto the infrastructure.
//
// An assignment maps every step to a non-switch node. It induces
// connections, each checked against the QoS of the step it leads into:
//   * one per edge u -> v, along the route from node(u) to node(v);
//   * a source leg into every root step when the source domain is set, from
//     the domain node with the lowest route latency (ties by node id);
//   * a destination leg out of every non-Knowledge sink step when the
//     destination domain is set, chosen the same way.
// A connection into step s must have latency <= s.max_latency and
// path reliability * node reliability >= s.min_reliability, and it reserves
// s.min_bandwidth on every link it crosses. A step without connections
// needs node reliability >= s.min_reliability. Per node, the summed step
// demands must fit the residual cpu/mem/storage; per link, the summed
// reservations must fit the residual bandwidth; coverage restricts the
// node's region. The objective is the summed latency of all connections.

#include <cstdint>
#include <string>
#include <vector>

#include "aiaas/chain/chain.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::chain {

enum class ConnectionKind { Edge, SourceLeg, DestinationLeg };

std::string_view to_string(ConnectionKind k);

struct Connection {
  ConnectionKind kind = ConnectionKind::Edge;
  std::string from_node;
  std::string to_node;
  std::string step;       // step whose QoS the connection is checked against
  std::string from_step;  // predecessor for edges, empty for legs
  double latency_ms = 0.0;
  double reliability = 1.0;     // path reliability times the step node's reliability
  std::int64_t bandwidth = 0;   // reserved on each link
  std::vector<std::size_t> links;

  friend bool operator==(const Connection&, const Connection&) = default;
};

struct Embedding {
  std::string chain_id;
  std::string owner;
  std::vector<std::string> step_nodes;  // indexed like chain.steps
  std::vector<Connection> connections;
  double total_latency_ms = 0.0;
  std::vector<std::string> step_allocations;  // indexed like chain.steps, empty when not reserved
  std::vector<std::string> link_allocations;

  const std::string& node_of(const MklChain& chain, std::string_view step_id) const;

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

enum class EmbedStatus { Embedded, Infeasible, SearchExhausted };

std::string_view to_string(EmbedStatus s);

struct EmbedResult {
  EmbedStatus status = EmbedStatus::Infeasible;
  Embedding embedding;
  std::string constraint;  // first unsatisfiable constraint when not embedded
  std::string step;        // step at which it was found
  std::size_t expansions = 0;

  bool feasible() const { return status == EmbedStatus::Embedded; }
};

struct EmbedOptions {
  /// Candidate placements tried before giving up with SearchExhausted.
  std::size_t expansion_budget = 100000;
  /// Allocation owner, defaults to the chain id.
  std::string owner;
  /// When false the state is left untouched and no allocations are made.
  bool reserve = true;
};

/// Depth-first placement in topological order. Each step tries its feasible
/// nodes by increasing added latency (ties by node id) and backtracks on
/// dead ends, so within the budget the verdict is exact. On success the
/// reservations are made all-or-nothing; on failure the state is unchanged.
/// Throws ValidationError for an invalid chain and NotFoundError for
/// unknown domain entries.
EmbedResult embed(const MklChain& chain, sdi::TopologyState& state, const EmbedOptions& options = {});

/// Exhaustive search over every assignment, checked by verify_assignment.
/// Returns the minimum-latency feasible assignment, ties broken by the
/// lexicographically smallest node-id sequence in step declaration order.
/// Never reserves. Throws ValidationError when nodes^steps > limit.
EmbedResult embed_bruteforce(const MklChain& chain, const sdi::TopologyState& state,
                             std::uint64_t limit = 1000000);

/// Makes the node and link reservations of a computed embedding. All or
/// nothing: on failure every allocation made so far is released and the
/// CapacityError is rethrown.
void reserve_embedding(const MklChain& chain, sdi::TopologyState& state, Embedding& embedding,
                       const std::string& owner);

/// Connections and total latency for a full assignment, without checks.
Embedding describe_assignment(const MklChain& chain, const sdi::Topology& topology,
                              const std::vector<std::string>& step_nodes);

}  // namespace aiaas::chain
