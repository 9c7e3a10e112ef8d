#include "aiaas/control/scheduler.hpp"

#include <algorithm>
#include <sstream>

#include "aiaas/common/error.hpp"
#include "aiaas/metrics/csv.hpp"

namespace aiaas::control {

std::int64_t TierScheduler::period(sdi::Tier tier) const {
  switch (tier) {
    case sdi::Tier::Core: return core_period_ms;
    case sdi::Tier::Edge: return edge_period_ms;
    case sdi::Tier::Access: return access_period_ms;
  }
  return core_period_ms;
}

void TierScheduler::validate() const {
  if (core_period_ms <= 0 || edge_period_ms <= 0 || access_period_ms <= 0) {
    throw ValidationError("tier periods must be > 0");
  }
  if (access_period_ms > edge_period_ms || edge_period_ms > core_period_ms) {
    throw ValidationError("a child tier's period must not exceed its parent's (access <= edge <= core)");
  }
}

Orchestrator::Orchestrator(sdi::TopologyState& live, FunctionRegistry registry, chain::Catalog catalog,
                           OrchestratorOptions options)
    : live_(live), registry_(std::move(registry)), catalog_(std::move(catalog)), options_(std::move(options)) {
  options_.tiers.validate();
  catalog_.validate();
  if (options_.sandbox && options_.sandbox_options.horizon_ticks == 0) {
    throw ValidationError("sandbox horizon must be >= 1 tick");
  }
}

MklInstance& Orchestrator::instantiate(const chain::MklChain& chain, std::string id) {
  for (const MklInstance& inst : instances_) {
    if (inst.chain().id == chain.id) throw ValidationError("chain '" + chain.id + "' is already instantiated");
    if (!id.empty() && inst.id() == id) throw ValidationError("instance id '" + id + "' is already used");
  }
  instances_.push_back(MklInstance::instantiate(chain, live_, std::move(id)));
  return instances_.back();
}

MklInstance& Orchestrator::instance(std::string_view id) {
  for (MklInstance& inst : instances_) {
    if (inst.id() == id) return inst;
  }
  throw NotFoundError("unknown instance '" + std::string(id) + "'");
}

void Orchestrator::terminate(const std::string& instance_id) {
  MklInstance& inst = instance(instance_id);
  inst.terminate(live_);
  for (auto it = leases_.owner_of.begin(); it != leases_.owner_of.end();) {
    it = it->second == inst.chain().id ? leases_.owner_of.erase(it) : std::next(it);
  }
}

std::int64_t Orchestrator::period_of(const MklInstance& inst) const {
  if (inst.chain().tick_period_ms > 0) return inst.chain().tick_period_ms;
  return options_.tiers.period(inst.tier(live_.topology()));
}

std::int64_t Orchestrator::window() const {
  if (options_.conflict_window_ms >= 0) return options_.conflict_window_ms;
  std::int64_t fastest = 0;
  for (const MklInstance& inst : instances_) {
    if (inst.state() != InstanceState::Running) continue;
    const std::int64_t p = period_of(inst);
    if (fastest == 0 || p < fastest) fastest = p;
  }
  return fastest;
}

std::map<std::string, int> Orchestrator::priorities() const {
  std::map<std::string, int> out;
  for (const MklInstance& inst : instances_) out[inst.chain().id] = inst.chain().priority;
  return out;
}

MklInstance* Orchestrator::owner_of(const chain::ActionProposal& p) {
  for (MklInstance& inst : instances_) {
    if (inst.chain().id == p.issued_by) return &inst;
  }
  return nullptr;
}

void Orchestrator::emit(std::int64_t t, sdi::Tier tier, std::string chain, std::string event, std::string detail,
                        std::string verdict) {
  trace_.push_back({t, tier, std::move(chain), std::move(event), std::move(detail), std::move(verdict)});
}

void Orchestrator::run(std::int64_t duration_ms) {
  if (duration_ms < 0) throw ValidationError("duration must be >= 0");
  const std::int64_t end = clock_ms_ + duration_ms;
  std::int64_t t = clock_ms_;
  while (true) {
    // Next instant at or after t where some running instance is due.
    std::int64_t next = -1;
    for (const MklInstance& inst : instances_) {
      if (inst.state() != InstanceState::Running) continue;
      const std::int64_t p = period_of(inst);
      const std::int64_t due = ((t + p - 1) / p) * p;
      if (next < 0 || due < next) next = due;
    }
    if (next < 0 || next >= end) break;
    run_instant(next);
    t = next + 1;
  }
  clock_ms_ = end;
}

void Orchestrator::run_instant(std::int64_t t) {
  const sdi::Topology& topo = live_.topology();
  std::vector<MklInstance*> due;
  for (MklInstance& inst : instances_) {
    if (inst.state() == InstanceState::Running && t % period_of(inst) == 0) due.push_back(&inst);
  }
  std::stable_sort(due.begin(), due.end(), [&](const MklInstance* a, const MklInstance* b) {
    const int da = sdi::tier_depth(a->tier(topo));
    const int db = sdi::tier_depth(b->tier(topo));
    if (da != db) return da > db;
    return a->chain().id < b->chain().id;
  });

  std::map<std::string, sdi::Tier> tier_of;
  std::vector<chain::ActionProposal> pending;
  for (MklInstance* inst : due) {
    const sdi::Tier tier = inst->tier(topo);
    tier_of[inst->chain().id] = tier;
    const std::uint64_t faults_before = inst->fcaps().fault;
    auto ps = inst->tick(t, live_, registry_, catalog_);
    ++summary_.ticks;
    if (inst->fcaps().fault != faults_before) {
      ++summary_.faults;
      emit(t, tier, inst->chain().id, "fault", inst->last_fault(), "no proposals");
      continue;
    }
    emit(t, tier, inst->chain().id, "tick", "", std::to_string(ps.size()) + " proposals");
    for (const auto& p : ps) emit(t, tier, p.issued_by, "proposal", p.summary(), "pending");
    summary_.proposals += ps.size();
    pending.insert(pending.end(), ps.begin(), ps.end());
  }

  if (!pending.empty()) {
    const std::int64_t win = window();
    std::erase_if(history_, [&](const chain::ActionProposal& p) { return p.timestamp_ms < t - win; });
    std::vector<chain::ActionProposal> combined = history_;
    const std::size_t first_pending = combined.size();
    combined.insert(combined.end(), pending.begin(), pending.end());
    const ConflictReport report = detect_conflicts(std::move(combined), win, live_);
    auto tier_for = [&](const std::string& chain) {
      auto it = tier_of.find(chain);
      return it == tier_of.end() ? sdi::Tier::Core : it->second;
    };
    for (const Conflict& c : report.conflicts) {
      if (c.b < first_pending) continue;
      const auto& a = report.proposals[c.a];
      const auto& b = report.proposals[c.b];
      ++summary_.conflicts;
      emit(t, tier_for(b.issued_by), b.issued_by, "conflict", a.summary() + " | " + b.summary(),
           std::string(to_string(c.kind)));
    }

    std::vector<chain::ActionProposal> approved;
    if (options_.arbitration) {
      const ArbitrationResult arb = arbitrate(report, priorities(), first_pending, &leases_);
      for (const Decision& d : arb.decisions) {
        const sdi::Tier tier = tier_for(d.proposal.issued_by);
        if (d.approved) {
          emit(t, tier, d.proposal.issued_by, "approved", d.proposal.summary(), d.reason);
          continue;
        }
        ++summary_.rejected;
        if (summary_.first_decision_ms < 0) summary_.first_decision_ms = t;
        emit(t, tier, d.proposal.issued_by, "rejected", d.proposal.summary(), d.reason);
        if (MklInstance* owner = owner_of(d.proposal)) {
          if (d.reason.rfind("knob leased", 0) == 0) owner->count_security_rejection();
          owner->record(d.proposal, false, d.reason);
        }
      }
      approved = arb.approved;
    } else {
      approved = pending;
    }
    history_.insert(history_.end(), pending.begin(), pending.end());

    if (options_.sandbox && !approved.empty()) {
      ReplayContext ctx;
      ctx.registry = &registry_;
      ctx.catalog = &catalog_;
      for (const MklInstance& inst : instances_) {
        if (inst.state() == InstanceState::Running) ctx.period_ms[inst.id()] = period_of(inst);
      }
      ctx.priorities = priorities();
      ctx.leases = leases_;
      ctx.now_ms = t;
      ctx.conflict_window_ms = win;
      SandboxOptions so = options_.sandbox_options;
      so.arbitrate = options_.arbitration;
      std::vector<MklInstance> copies;
      for (const MklInstance& inst : instances_) {
        if (inst.state() == InstanceState::Running) copies.push_back(inst);
      }
      const SandboxResult sb = sandbox_dryrun(approved, live_, std::move(copies), ctx, so);
      ++summary_.sandbox_runs;
      emit(t, tier_for(approved.front().issued_by), "-", "sandbox",
           "reversals=" + std::to_string(sb.oscillation_count) + " violations=" + std::to_string(sb.violation_count) +
               " threshold=" + std::to_string(sb.threshold),
           sb.stable ? "stable" : "unstable");
      if (!sb.stable) {
        ++summary_.sandbox_unstable;
        for (const auto& p : approved) {
          ++summary_.withheld;
          emit(t, tier_for(p.issued_by), p.issued_by, "withheld", p.summary(), "sandbox unstable");
          if (MklInstance* owner = owner_of(p)) owner->record(p, false, "withheld: sandbox unstable");
        }
        approved.clear();
      }
    }

    for (const auto& p : approved) {
      const sdi::Tier tier = tier_for(p.issued_by);
      const ApplyOutcome o = apply_proposal(live_, p);
      MklInstance* owner = owner_of(p);
      if (!o.applied) {
        ++summary_.failed;
        emit(t, tier, p.issued_by, "failed", p.summary(), o.error);
        if (owner != nullptr) owner->record(p, false, "failed: " + o.error);
        continue;
      }
      const bool reversal = tracker_.observe(p.knob_key(), o.before, o.after);
      changes_.push_back({t, p.knob_key(), p.issued_by, o.before, o.after, reversal});
      ++summary_.applied;
      if (reversal) {
        ++summary_.reversals;
        if (summary_.first_decision_ms >= 0 && t >= summary_.first_decision_ms) {
          ++summary_.reversals_after_first_decision;
        }
      }
      emit(t, tier, p.issued_by, "applied", p.summary(), reversal ? "reversal" : "ok");
      if (owner != nullptr) owner->record(p, true, "applied");
    }
  }

  ++summary_.invariant_checks;
  const auto violations = live_.invariant_violations();
  if (!violations.empty()) {
    ++summary_.invariant_failures;
    std::string detail;
    for (const auto& v : violations) detail += (detail.empty() ? "" : " | ") + v;
    std::replace(detail.begin(), detail.end(), ',', ';');
    emit(t, sdi::Tier::Core, "-", "invariant", detail, "violated");
  }
}

std::string Orchestrator::trace_csv() const {
  std::ostringstream os;
  os << "time_ms,tier,chain,event,proposal,verdict\n";
  for (const TraceEvent& e : trace_) {
    os << e.time_ms << ',' << sdi::to_string(e.tier) << ',' << e.chain << ',' << e.event << ',' << e.proposal << ','
       << e.verdict << '\n';
  }
  return os.str();
}

std::string Orchestrator::fcaps_csv() const {
  std::ostringstream os;
  os << "instance,chain,state,fault,configuration,accounting,performance,security\n";
  for (const MklInstance& inst : instances_) {
    const FcapsCounters& f = inst.fcaps();
    os << inst.id() << ',' << inst.chain().id << ',' << to_string(inst.state()) << ',' << f.fault << ','
       << f.configuration << ',' << f.accounting << ',' << f.performance << ',' << f.security << '\n';
  }
  return os.str();
}

}  // namespace aiaas::control
