#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aiaas/chain/catalog.hpp"
#include "aiaas/chain/chain.hpp"
#include "aiaas/chain/embedding.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::control {

struct KnowledgeRecord {
  std::int64_t time_ms = 0;
  std::string key;  // "obs:<name>", "analysis:<kind>", "proposal:<knob key>"
  double value = 0.0;

  friend bool operator==(const KnowledgeRecord&, const KnowledgeRecord&) = default;
};

/// Blackboard shared by the steps of one tick.
struct StepIo {
  std::map<std::string, double> observations;
  std::vector<chain::AnalysisOutput> analyses;
  std::vector<chain::ActionProposal> proposals;
  std::vector<KnowledgeRecord> records;  // appended to the knowledge store when the tick completes
};

struct StepContext {
  const chain::MklChain& chain;
  const chain::MklStep& step;
  const sdi::TopologyState& state;
  const chain::Catalog& catalog;
  std::int64_t now_ms;
  const std::vector<KnowledgeRecord>& knowledge;
};

/// A step implementation. Throwing marks the tick as faulted.
using StepFunction = std::function<void(const StepContext&, StepIo&)>;

class FunctionRegistry {
 public:
  /// monitor.knob (params target = selector, knob), analyze.setpoint
  /// (params target, output_kind = "knob_setpoint"), plan.catalog (outputs
  /// without a catalog entry are skipped),
  /// execute.apply (no-op; the orchestrator applies), knowledge.store.
  static FunctionRegistry with_builtins();

  void add(std::string name, StepFunction fn);
  const StepFunction* find(std::string_view name) const;

 private:
  std::map<std::string, StepFunction, std::less<>> functions_;
};

enum class InstanceState { Instantiated, Running, Scaling, Terminated };

std::string_view to_string(InstanceState s);

struct FcapsCounters {
  std::uint64_t fault = 0;          // faulted ticks
  std::uint64_t configuration = 0;  // update and scale operations
  std::uint64_t accounting = 0;     // proposals applied to the live state
  std::uint64_t performance = 0;    // ticks executed
  std::uint64_t security = 0;       // proposals rejected for writing a knob leased to another chain

  friend bool operator==(const FcapsCounters&, const FcapsCounters&) = default;
};

struct ActionRecord {
  chain::ActionProposal proposal;
  bool applied = false;
  std::string reason;

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

struct InstanceSnapshot {
  std::string id;
  std::string chain_id;
  InstanceState state = InstanceState::Instantiated;
  std::vector<std::string> step_nodes;
  double total_latency_ms = 0.0;
  FcapsCounters fcaps;
  std::size_t actions = 0;
  std::size_t knowledge_records = 0;
};

/// One MAPE-K loop placed on the infrastructure.
///
/// Lifecycle: Instantiated -> Running -> {Scaling -> Running}* -> Terminated.
/// Verbs applied in other states throw StateError.
class MklInstance {
 public:
  /// Embeds and reserves the chain, then enters Running. Throws
  /// ValidationError for an invalid chain and InfeasibleError when no
  /// placement exists. `id` defaults to the chain id and owns the reservations.
  static MklInstance instantiate(const chain::MklChain& chain, sdi::TopologyState& state, std::string id = {},
                                 const chain::EmbedOptions& options = {});

  const std::string& id() const { return id_; }
  const chain::MklChain& chain() const { return chain_; }
  const chain::Embedding& embedding() const { return embedding_; }
  InstanceState state() const { return state_; }
  const std::vector<InstanceState>& transitions() const { return transitions_; }
  const std::vector<ActionRecord>& action_log() const { return action_log_; }
  const std::vector<KnowledgeRecord>& knowledge() const { return knowledge_; }
  const FcapsCounters& fcaps() const { return fcaps_; }
  const std::string& last_fault() const { return last_fault_; }

  /// Replaces the chain definition. Non-structural changes (priority, tick
  /// period, params, category) are taken in place; otherwise the chain is
  /// re-embedded and the old placement is restored if that fails.
  void update(const chain::MklChain& revised, sdi::TopologyState& state);

  InstanceSnapshot query() const;

  /// Multiplies the cpu/mem/storage demand of the Analyze and Execute steps
  /// by `factor`, resizing in place or re-embedding when a node cannot hold
  /// the new demand. Requires Running.
  void scale(sdi::TopologyState& state, double factor);

  /// Releases every reservation. Allowed from Instantiated and Running.
  void terminate(sdi::TopologyState& state);

  /// Runs Monitor, Analyze, Plan and Knowledge steps in topological order.
  /// Returns the Plan output when the chain has an Execute step, without
  /// applying it. A missing or throwing function increments the fault
  /// counter and yields no proposals.
  std::vector<chain::ActionProposal> tick(std::int64_t now_ms, const sdi::TopologyState& state,
                                          const FunctionRegistry& registry, const chain::Catalog& catalog);

  /// Appends to the action log. Throws StateError when timestamps would
  /// decrease.
  void record(const chain::ActionProposal& proposal, bool applied, std::string reason);
  void count_security_rejection() { ++fcaps_.security; }

  /// Tier of the node hosting the last step in topological order.
  sdi::Tier tier(const sdi::Topology& topology) const;

 private:
  MklInstance() = default;
  void transition(InstanceState next);
  void replace_placement(const chain::MklChain& revised, sdi::TopologyState& state);

  std::string id_;
  chain::MklChain chain_;
  chain::Embedding embedding_;
  chain::EmbedOptions embed_options_;
  InstanceState state_ = InstanceState::Instantiated;
  std::vector<InstanceState> transitions_;
  std::vector<ActionRecord> action_log_;
  std::vector<KnowledgeRecord> knowledge_;
  FcapsCounters fcaps_;
  std::string last_fault_;
};

}  // namespace aiaas::control
