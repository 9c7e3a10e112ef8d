#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "aiaas/chain/catalog.hpp"
#include "aiaas/control/conflicts.hpp"
#include "aiaas/control/instance.hpp"
#include "aiaas/control/sandbox.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::control {

/// Per-tier tick periods. Access reports to Edge and Edge to Core, and a
/// child tier never ticks slower than its parent.
struct TierScheduler {
  std::int64_t core_period_ms = 10000;
  std::int64_t edge_period_ms = 1000;
  std::int64_t access_period_ms = 100;

  std::int64_t period(sdi::Tier tier) const;
  /// Throws ValidationError unless every period is > 0 and
  /// access <= edge <= core.
  void validate() const;
};

struct OrchestratorOptions {
  bool arbitration = true;
  bool sandbox = true;
  /// Proposals this far apart still conflict; < 0 means the fastest period.
  std::int64_t conflict_window_ms = -1;
  SandboxOptions sandbox_options;
  TierScheduler tiers;
};

struct TraceEvent {
  std::int64_t time_ms = 0;
  sdi::Tier tier = sdi::Tier::Core;
  std::string chain;
  std::string event;     // tick, fault, conflict, approved, rejected, sandbox, withheld, applied, failed, invariant
  std::string proposal;  // proposal summary or detail text
  std::string verdict;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct KnobChange {
  std::int64_t time_ms = 0;
  std::string knob;
  std::string chain;
  double before = 0.0;
  double after = 0.0;
  bool reversal = false;
};

struct RunSummary {
  std::size_t ticks = 0;
  std::size_t faults = 0;
  std::size_t proposals = 0;
  std::size_t applied = 0;
  std::size_t rejected = 0;
  std::size_t withheld = 0;
  std::size_t failed = 0;
  std::size_t conflicts = 0;
  std::size_t sandbox_runs = 0;
  std::size_t sandbox_unstable = 0;
  std::size_t reversals = 0;
  std::int64_t first_decision_ms = -1;  // first instant an arbitration rejected a proposal
  std::size_t reversals_after_first_decision = 0;
  std::size_t invariant_checks = 0;
  std::size_t invariant_failures = 0;
};

/// Single writer of the live state: ticks instances on their periods and
/// gates every proposal through conflict detection, arbitration and the
/// sandbox before applying it.
///
/// Events run in (time, tier depth with deeper first, chain id) order. At
/// each instant every due instance ticks, then the instant's proposals go
/// through detect_conflicts (together with proposals issued within the
/// conflict window), arbitrate (when enabled), sandbox_dryrun (when enabled;
/// an unstable verdict withholds the whole batch) and are applied in event
/// order. The capacity invariant is checked after every instant.
class Orchestrator {
 public:
  Orchestrator(sdi::TopologyState& live, FunctionRegistry registry, chain::Catalog catalog,
               OrchestratorOptions options = {});

  /// Instantiates and registers a chain; see MklInstance::instantiate.
  /// Chain ids must be unique among registered instances.
  MklInstance& instantiate(const chain::MklChain& chain, std::string id = {});
  void terminate(const std::string& instance_id);

  /// Stable references: instances are never moved once registered.
  std::deque<MklInstance>& instances() { return instances_; }
  const std::deque<MklInstance>& instances() const { return instances_; }
  MklInstance& instance(std::string_view id);

  std::int64_t period_of(const MklInstance& inst) const;
  std::int64_t clock_ms() const { return clock_ms_; }

  /// Processes every instant in [clock, clock + duration) and advances the
  /// clock.
  void run(std::int64_t duration_ms);

  const std::vector<TraceEvent>& trace() const { return trace_; }
  const std::vector<KnobChange>& knob_changes() const { return changes_; }
  const RunSummary& summary() const { return summary_; }
  const KnobLeases& leases() const { return leases_; }

  /// time_ms,tier,chain,event,proposal,verdict
  std::string trace_csv() const;
  /// instance,chain,state,fault,configuration,accounting,performance,security
  std::string fcaps_csv() const;

 private:
  void run_instant(std::int64_t t);
  void emit(std::int64_t t, sdi::Tier tier, std::string chain, std::string event, std::string detail,
            std::string verdict);
  std::int64_t window() const;
  std::map<std::string, int> priorities() const;
  MklInstance* owner_of(const chain::ActionProposal& p);

  sdi::TopologyState& live_;
  FunctionRegistry registry_;
  chain::Catalog catalog_;
  OrchestratorOptions options_;
  std::deque<MklInstance> instances_;
  std::int64_t clock_ms_ = 0;
  std::vector<chain::ActionProposal> history_;
  KnobLeases leases_;
  ReversalTracker tracker_;
  std::vector<TraceEvent> trace_;
  std::vector<KnobChange> changes_;
  RunSummary summary_;
};

}  // namespace aiaas::control
