#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aiaas/chain/catalog.hpp"
#include "aiaas/control/conflicts.hpp"
#include "aiaas/control/instance.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::control {

/// Counts sign reversals of applied knob changes: a change whose sign is
/// opposite to the previous non-zero change of the same knob.
class ReversalTracker {
 public:
  /// Returns true when this change is a reversal.
  bool observe(const std::string& knob_key, double before, double after);

  std::size_t total() const { return total_; }
  const std::map<std::string, std::size_t>& per_knob() const { return counts_; }

 private:
  std::map<std::string, int> last_direction_;
  std::map<std::string, std::size_t> counts_;
  std::size_t total_ = 0;
};

struct ApplyOutcome {
  bool applied = false;
  double before = 0.0;
  double after = 0.0;
  std::string error;  // set when not applied
};

/// Writes the proposal's knob. Capacity errors and vanished targets are
/// reported in the outcome rather than thrown; the state is unchanged then.
ApplyOutcome apply_proposal(sdi::TopologyState& state, const chain::ActionProposal& proposal);

/// What a replay needs to re-run the loops.
struct ReplayContext {
  const FunctionRegistry* registry = nullptr;
  const chain::Catalog* catalog = nullptr;
  std::map<std::string, std::int64_t> period_ms;  // per instance id
  std::map<std::string, int> priorities;          // per chain id
  KnobLeases leases;
  std::int64_t now_ms = 0;
  std::int64_t conflict_window_ms = 0;
};

struct SandboxOptions {
  std::size_t horizon_ticks = 10;
  /// Default horizon_ticks / 2.
  std::optional<std::size_t> reversal_threshold;
  /// Arbitrate replayed proposals (with a copy of the leases) before
  /// applying them; otherwise apply every proposal in event order.
  bool arbitrate = true;
};

struct SandboxResult {
  std::size_t oscillation_count = 0;  // knob sign reversals over the replay
  std::size_t violation_count = 0;    // failed applications plus capacity invariant breaches
  std::size_t threshold = 0;
  std::size_t ticks_replayed = 0;
  bool stable = true;                 // oscillation_count <= threshold and no violations
  std::map<std::string, std::size_t> reversals_by_knob;
};

/// Applies `approved` to a clone of `live`, then replays the Running
/// instances for `horizon_ticks` ticks of the fastest one. Instances are
/// taken by value, so their logs and counters are not touched; `live` is
/// never modified. Throws ValidationError when horizon_ticks is 0.
SandboxResult sandbox_dryrun(const std::vector<chain::ActionProposal>& approved, const sdi::TopologyState& live,
                             std::vector<MklInstance> instances, const ReplayContext& context,
                             const SandboxOptions& options = {});

}  // namespace aiaas::control
