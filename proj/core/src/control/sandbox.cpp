#include "aiaas/control/sandbox.hpp"

#include <algorithm>
#include <cmath>

#include "aiaas/chain/knobs.hpp"
#include "aiaas/common/error.hpp"

namespace aiaas::control {

bool ReversalTracker::observe(const std::string& knob_key, double before, double after) {
  const int dir = after > before ? 1 : (after < before ? -1 : 0);
  if (dir == 0) return false;
  int& last = last_direction_[knob_key];
  const bool reversal = last != 0 && last != dir;
  last = dir;
  if (reversal) {
    ++counts_[knob_key];
    ++total_;
  }
  return reversal;
}

ApplyOutcome apply_proposal(sdi::TopologyState& state, const chain::ActionProposal& proposal) {
  ApplyOutcome out;
  try {
    out.before = static_cast<double>(chain::read_knob(state, proposal.target, proposal.parameter));
    const auto value = static_cast<std::int64_t>(std::llround(proposal.value));
    chain::write_knob(state, proposal.target, proposal.parameter, value);
    out.after = static_cast<double>(value);
    out.applied = true;
  } catch (const Error& e) {
    out.applied = false;
    out.after = out.before;
    out.error = e.what();
  }
  return out;
}

SandboxResult sandbox_dryrun(const std::vector<chain::ActionProposal>& approved, const sdi::TopologyState& live,
                             std::vector<MklInstance> instances, const ReplayContext& context,
                             const SandboxOptions& options) {
  if (options.horizon_ticks == 0) throw ValidationError("sandbox horizon must be >= 1 tick");
  SandboxResult result;
  result.threshold = options.reversal_threshold.value_or(options.horizon_ticks / 2);

  sdi::TopologyState clone = live.clone();
  ReversalTracker tracker;
  KnobLeases leases = context.leases;
  auto apply_all = [&](const std::vector<chain::ActionProposal>& ps) {
    for (const chain::ActionProposal& p : ps) {
      const ApplyOutcome o = apply_proposal(clone, p);
      if (!o.applied) {
        ++result.violation_count;
        continue;
      }
      tracker.observe(p.knob_key(), o.before, o.after);
    }
    result.violation_count += clone.invariant_violations().size();
  };
  apply_all(approved);

  std::int64_t fastest = 0;
  for (const MklInstance& inst : instances) {
    if (inst.state() != InstanceState::Running) continue;
    const std::int64_t p = context.period_ms.at(inst.id());
    if (p > 0 && (fastest == 0 || p < fastest)) fastest = p;
  }
  if (fastest > 0 && context.registry != nullptr && context.catalog != nullptr) {
    // Deeper tiers first, then chain id, matching the live scheduler.
    std::vector<std::size_t> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const int da = sdi::tier_depth(instances[a].tier(live.topology()));
      const int db = sdi::tier_depth(instances[b].tier(live.topology()));
      if (da != db) return da > db;
      if (instances[a].chain().id != instances[b].chain().id) return instances[a].chain().id < instances[b].chain().id;
      return instances[a].id() < instances[b].id();
    });
    for (std::size_t k = 1; k <= options.horizon_ticks; ++k) {
      const std::int64_t t = context.now_ms + static_cast<std::int64_t>(k) * fastest;
      std::vector<chain::ActionProposal> pending;
      for (std::size_t i : order) {
        MklInstance& inst = instances[i];
        if (inst.state() != InstanceState::Running) continue;
        const std::int64_t p = context.period_ms.at(inst.id());
        if (p <= 0 || t % p != 0) continue;
        auto ps = inst.tick(t, clone, *context.registry, *context.catalog);
        pending.insert(pending.end(), ps.begin(), ps.end());
      }
      if (options.arbitrate && !pending.empty()) {
        const ConflictReport report = detect_conflicts(pending, context.conflict_window_ms, clone);
        pending = arbitrate(report, context.priorities, 0, &leases).approved;
      }
      apply_all(pending);
      ++result.ticks_replayed;
    }
  }
  result.oscillation_count = tracker.total();
  result.reversals_by_knob = tracker.per_knob();
  result.stable = result.oscillation_count <= result.threshold && result.violation_count == 0;
  return result;
}

}  // namespace aiaas::control
