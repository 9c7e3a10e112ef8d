#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "aiaas/chain/chain_io.hpp"
#include "aiaas/chain/knobs.hpp"
#include "aiaas/common/error.hpp"
#include "aiaas/control/conflicts.hpp"
#include "aiaas/control/instance.hpp"
#include "aiaas/control/sandbox.hpp"
#include "aiaas/control/scheduler.hpp"
#include "generators.hpp"

using namespace aiaas;
using namespace aiaas::control;

namespace {

const std::string kConfigs = AIAAS_CONFIG_DIR;
const std::string kKnob = "vnf.cpu.millicores";

chain::MklChain setpoint_chain(const std::string& file) { return chain::load_chain(kConfigs + "/chains/" + file); }
chain::Catalog setpoint_catalog() { return chain::load_catalog(kConfigs + "/catalogs/setpoint.json"); }

// Preset topology with the shared knob the setpoint chains fight over.
struct KnobWorld {
  sdi::TopologyState state{sdi::Topology::preset("paper")};
  std::string vnf;
  KnobWorld() { vnf = state.allocate("waterloo-vm4", {2000, 0, 0, 0}, "demo-vnf").id; }
  std::int64_t knob() const { return chain::read_knob(state, vnf, kKnob); }
};

chain::MklStep step(std::string id, chain::StepKind kind, std::string fn) {
  chain::MklStep s;
  s.id = std::move(id);
  s.kind = kind;
  s.function_ref = std::move(fn);
  s.qos.cpu = 50;
  return s;
}

chain::MklChain observer(std::string id, std::int64_t period) {
  chain::MklChain c;
  c.id = std::move(id);
  c.tick_period_ms = period;
  c.steps = {step("a", chain::StepKind::Analyze, "analyze.setpoint"),
             step("k", chain::StepKind::Knowledge, "knowledge.store")};
  c.steps[0].params["target"] = "7";
  c.edges = chain::default_edges(c.steps);
  c.priority = 1;
  return c;
}

chain::ActionProposal proposal(const std::string& target, const std::string& by, double value, double previous,
                               std::int64_t t) {
  chain::ActionProposal p;
  p.target = target;
  p.node = "waterloo-vm4";
  p.parameter = kKnob;
  p.value = value;
  p.previous = previous;
  p.direction = value > previous ? 1 : (value < previous ? -1 : 0);
  p.issued_by = by;
  p.timestamp_ms = t;
  return p;
}

// O(n^2) restatement of the conflict predicate.
std::vector<Conflict> oracle_conflicts(const std::vector<chain::ActionProposal>& ps, std::int64_t window,
                                       const sdi::TopologyState& state) {
  auto growth = [&](const chain::ActionProposal& p) {
    sdi::ResourceVector g;
    const std::int64_t now = chain::read_knob(state, p.target, p.parameter);
    const auto next = static_cast<std::int64_t>(std::llround(p.value));
    if (next > now) {
      if (p.parameter == "vnf.cpu.millicores") g.cpu = next - now;
      if (p.parameter == "vnf.mem.mib") g.mem = next - now;
    }
    return g;
  };
  std::set<Conflict> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const auto& a = ps[i];
      const auto& b = ps[j];
      if (a.issued_by == b.issued_by || std::abs(a.timestamp_ms - b.timestamp_ms) > window) continue;
      if (a.knob_key() == b.knob_key() && a.direction * b.direction < 0) {
        out.insert({i, j, ConflictKind::SameKnobOpposing});
      }
      const sdi::ResourceVector ga = growth(a), gb = growth(b);
      if (a.node == b.node && ga != sdi::ResourceVector{} && gb != sdi::ResourceVector{} &&
          !(ga + gb).fits_within(state.residual(a.node))) {
        out.insert({i, j, ConflictKind::SharedResourceOversubscription});
      }
    }
  }
  return {out.begin(), out.end()};
}

std::size_t count_events(const Orchestrator& o, const std::string& chain, const std::string& event) {
  std::size_t n = 0;
  for (const TraceEvent& e : o.trace()) {
    if (e.chain == chain && e.event == event) ++n;
  }
  return n;
}

}  // namespace

TEST(Lifecycle, InstantiateReservesAndRuns) {
  KnobWorld w;
  const sdi::TopologyState before = w.state;
  MklInstance inst = MklInstance::instantiate(setpoint_chain("setpoint_high.json"), w.state);
  EXPECT_EQ(inst.state(), InstanceState::Running);
  EXPECT_FALSE(w.state.allocations_of(inst.id()).empty());
  EXPECT_NE(w.state, before);
  inst.terminate(w.state);
  EXPECT_EQ(inst.state(), InstanceState::Terminated);
  EXPECT_EQ(w.state, before);
}

TEST(Lifecycle, TerminatedInstanceRejectsVerbs) {
  KnobWorld w;
  MklInstance inst = MklInstance::instantiate(setpoint_chain("setpoint_high.json"), w.state);
  inst.terminate(w.state);
  EXPECT_THROW(inst.scale(w.state, 2.0), StateError);
  EXPECT_THROW(inst.tick(0, w.state, FunctionRegistry::with_builtins(), setpoint_catalog()), StateError);
  EXPECT_THROW(inst.terminate(w.state), StateError);
}

TEST(Lifecycle, ScaleGoesThroughScaling) {
  KnobWorld w;
  MklInstance inst = MklInstance::instantiate(setpoint_chain("setpoint_high.json"), w.state);
  inst.scale(w.state, 2.0);
  EXPECT_EQ(inst.state(), InstanceState::Running);
  const auto& tr = inst.transitions();
  EXPECT_NE(std::find(tr.begin(), tr.end(), InstanceState::Scaling), tr.end());
  EXPECT_EQ(inst.fcaps().configuration, 1u);
  EXPECT_TRUE(w.state.invariant_violations().empty());
}

TEST(Lifecycle, InfeasibleChainThrows) {
  KnobWorld w;
  chain::MklChain c = setpoint_chain("setpoint_high.json");
  c.steps[0].qos.cpu = 1000000;
  const std::string before = w.state.serialize();
  EXPECT_THROW(MklInstance::instantiate(c, w.state), InfeasibleError);
  EXPECT_EQ(w.state.serialize(), before);
}

TEST(Tick, AnalysisOnlyChainUpdatesKnowledgeOnly) {
  KnobWorld w;
  MklInstance inst = MklInstance::instantiate(observer("watch", 100), w.state);
  const auto ps = inst.tick(0, w.state, FunctionRegistry::with_builtins(), setpoint_catalog());
  EXPECT_TRUE(ps.empty());
  ASSERT_FALSE(inst.knowledge().empty());
  EXPECT_EQ(inst.knowledge().front().key, "analysis:knob_setpoint");
  EXPECT_EQ(inst.fcaps().performance, 1u);
}

TEST(Tick, ProposesTowardTheSetpoint) {
  KnobWorld w;
  MklInstance inst = MklInstance::instantiate(setpoint_chain("setpoint_high.json"), w.state);
  const auto ps = inst.tick(0, w.state, FunctionRegistry::with_builtins(), setpoint_catalog());
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].value, 3000.0);
  EXPECT_EQ(ps[0].direction, 1);
  EXPECT_EQ(w.knob(), 2000);
}

TEST(Tick, MonitorFaultCountsAndYieldsNothing) {
  KnobWorld w;
  chain::MklChain c = setpoint_chain("setpoint_high.json");
  c.steps[0].params["target"] = "owner:nobody";
  MklInstance inst = MklInstance::instantiate(c, w.state);
  const auto ps = inst.tick(0, w.state, FunctionRegistry::with_builtins(), setpoint_catalog());
  EXPECT_TRUE(ps.empty());
  EXPECT_EQ(inst.fcaps().fault, 1u);
  EXPECT_FALSE(inst.last_fault().empty());
  EXPECT_TRUE(inst.knowledge().empty());
}

TEST(Tick, MisalignedTimeIsRejected) {
  KnobWorld w;
  MklInstance inst = MklInstance::instantiate(setpoint_chain("setpoint_high.json"), w.state);
  EXPECT_THROW(inst.tick(500, w.state, FunctionRegistry::with_builtins(), setpoint_catalog()), StateError);
}

TEST(Conflicts, OpposingWritesOnOneKnob) {
  KnobWorld w;
  const ConflictReport r = detect_conflicts(
      {proposal(w.vnf, "a", 2500, 2000, 0), proposal(w.vnf, "b", 1700, 2000, 0)}, 0, w.state);
  ASSERT_EQ(r.conflicts.size(), 1u);
  EXPECT_EQ(r.conflicts[0].kind, ConflictKind::SameKnobOpposing);
}

TEST(Conflicts, DisjointKnobsDoNotConflict) {
  KnobWorld w;
  const std::string other = w.state.allocate("toronto-vm3", {500, 0, 0, 0}, "x").id;
  auto q = proposal(other, "b", 100, 500, 0);
  q.node = "toronto-vm3";
  EXPECT_TRUE(detect_conflicts({proposal(w.vnf, "a", 2500, 2000, 0), q}, 0, w.state).conflicts.empty());
}

TEST(Conflicts, OutsideWindowDoesNotConflict) {
  KnobWorld w;
  EXPECT_TRUE(detect_conflicts({proposal(w.vnf, "a", 2500, 2000, 0), proposal(w.vnf, "b", 1700, 2000, 11)}, 10,
                               w.state)
                  .conflicts.empty());
}

TEST(ConflictsProperty, MatchesPairwiseOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const sdi::Topology topo = sdi::Topology::build(testgen::random_topology(rng));
    const sdi::TopologyState st = testgen::random_loaded_state(rng, topo, 1 + static_cast<int>(rng.below(4)));
    const auto ps = testgen::random_proposals(rng, st, 2 + rng.below(12), 40);
    const std::int64_t window = testgen::pick(rng, 0, 20);
    const ConflictReport r = detect_conflicts(ps, window, st);
    EXPECT_EQ(r.conflicts, oracle_conflicts(ps, window, st)) << "seed " << seed;
  }
}

TEST(Arbitrate, LowerPriorityValueWins) {
  KnobWorld w;
  const ConflictReport r = detect_conflicts(
      {proposal(w.vnf, "b", 2500, 2000, 0), proposal(w.vnf, "a", 1700, 2000, 0)}, 0, w.state);
  const ArbitrationResult res = arbitrate(r, {{"a", 2}, {"b", 1}});
  ASSERT_EQ(res.approved.size(), 1u);
  EXPECT_EQ(res.approved[0].issued_by, "b");
  EXPECT_EQ(res.conflict_sets, 1u);
  EXPECT_NE(res.decisions[1].reason.find("lost to b"), std::string::npos);
}

TEST(Arbitrate, TieGoesToSmallerChainId) {
  KnobWorld w;
  const ConflictReport r = detect_conflicts(
      {proposal(w.vnf, "beta", 2500, 2000, 0), proposal(w.vnf, "alpha", 1700, 2000, 0)}, 0, w.state);
  const ArbitrationResult res = arbitrate(r, {{"alpha", 1}, {"beta", 1}});
  ASSERT_EQ(res.approved.size(), 1u);
  EXPECT_EQ(res.approved[0].issued_by, "alpha");
  for (const Decision& d : res.decisions) EXPECT_NE(d.reason.find("tie-break"), std::string::npos);
}

TEST(Arbitrate, NoConflictApprovesEverything) {
  KnobWorld w;
  const ConflictReport r =
      detect_conflicts({proposal(w.vnf, "a", 2500, 2000, 0), proposal(w.vnf, "b", 2600, 2000, 0)}, 0, w.state);
  EXPECT_EQ(arbitrate(r, {}).approved.size(), 2u);
}

TEST(Arbitrate, MissingPriorityIsAnError) {
  KnobWorld w;
  const ConflictReport r = detect_conflicts(
      {proposal(w.vnf, "a", 2500, 2000, 0), proposal(w.vnf, "b", 1700, 2000, 0)}, 0, w.state);
  EXPECT_THROW(arbitrate(r, {{"a", 1}}), ValidationError);
}

TEST(Arbitrate, LeaseBlocksTheLoser) {
  KnobWorld w;
  KnobLeases leases;
  const ConflictReport first = detect_conflicts(
      {proposal(w.vnf, "a", 2500, 2000, 0), proposal(w.vnf, "b", 1700, 2000, 0)}, 0, w.state);
  arbitrate(first, {{"a", 1}, {"b", 2}}, 0, &leases);
  EXPECT_EQ(leases.owner_of.at(w.vnf + "/" + kKnob), "a");
  const ConflictReport later = detect_conflicts({proposal(w.vnf, "b", 1700, 2500, 10)}, 0, w.state);
  const ArbitrationResult res = arbitrate(later, {{"a", 1}, {"b", 2}}, 0, &leases);
  EXPECT_TRUE(res.approved.empty());
  EXPECT_NE(res.decisions[0].reason.find("leased"), std::string::npos);
}

TEST(ArbitrateProperty, OnlyTheWinningChainSurvivesEachSet) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 500);
    const sdi::Topology topo = sdi::Topology::build(testgen::random_topology(rng));
    const sdi::TopologyState st = testgen::random_loaded_state(rng, topo, 2);
    const auto ps = testgen::random_proposals(rng, st, 10, 5);
    const std::map<std::string, int> prio{{"c0", static_cast<int>(rng.below(3))},
                                          {"c1", static_cast<int>(rng.below(3))},
                                          {"c2", static_cast<int>(rng.below(3))}};
    const ConflictReport r = detect_conflicts(ps, 5, st);
    const ArbitrationResult res = arbitrate(r, prio);
    ASSERT_EQ(res.decisions.size(), ps.size());
    std::set<std::size_t> rejected;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (!res.decisions[i].approved) rejected.insert(i);
    }
    // No surviving pair still conflicts, and every loser lost to a better chain.
    for (const Conflict& c : r.conflicts) {
      EXPECT_TRUE(rejected.count(c.a) || rejected.count(c.b)) << "seed " << seed;
    }
    for (std::size_t i : rejected) {
      const std::string& loser = ps[i].issued_by;
      const std::string winner = res.decisions[i].reason.substr(8, 2);
      EXPECT_TRUE(prio.at(winner) < prio.at(loser) || (prio.at(winner) == prio.at(loser) && winner < loser));
    }
  }
}

namespace {

struct SandboxWorld : KnobWorld {
  FunctionRegistry registry = FunctionRegistry::with_builtins();
  chain::Catalog catalog = setpoint_catalog();
  std::vector<MklInstance> instances;
  ReplayContext ctx;

  void add(const std::string& file) {
    const chain::MklChain c = setpoint_chain(file);
    instances.push_back(MklInstance::instantiate(c, state));
    ctx.period_ms[c.id] = c.tick_period_ms;
    ctx.priorities[c.id] = c.priority;
  }
  SandboxWorld() {
    ctx.registry = &registry;
    ctx.catalog = &catalog;
    ctx.conflict_window_ms = 1000;
  }
};

}  // namespace

TEST(Sandbox, SingleLoopOnConstantTargetIsStable) {
  SandboxWorld w;
  w.add("setpoint_high.json");
  const std::string before = w.state.serialize();
  const SandboxResult r = sandbox_dryrun({}, w.state, w.instances, w.ctx);
  EXPECT_TRUE(r.stable);
  EXPECT_EQ(r.oscillation_count, 0u);
  EXPECT_EQ(r.ticks_replayed, 10u);
  EXPECT_EQ(w.state.serialize(), before);
}

TEST(Sandbox, OpposingLoopsWithoutArbitrationOscillate) {
  SandboxWorld w;
  w.add("setpoint_high.json");
  w.add("setpoint_low.json");
  SandboxOptions opt;
  opt.arbitrate = false;
  const std::string before = w.state.serialize();
  const SandboxResult r = sandbox_dryrun({}, w.state, w.instances, w.ctx, opt);
  EXPECT_GE(r.oscillation_count, opt.horizon_ticks / 2);
  EXPECT_FALSE(r.stable);
  EXPECT_EQ(w.state.serialize(), before);
  for (const MklInstance& inst : w.instances) EXPECT_TRUE(inst.knowledge().empty());
}

TEST(Sandbox, OpposingLoopsWithArbitrationSettle) {
  SandboxWorld w;
  w.add("setpoint_high.json");
  w.add("setpoint_low.json");
  const SandboxResult r = sandbox_dryrun({}, w.state, w.instances, w.ctx);
  EXPECT_TRUE(r.stable);
  EXPECT_EQ(r.oscillation_count, 0u);
}

TEST(Sandbox, ZeroHorizonIsRejected) {
  SandboxWorld w;
  SandboxOptions opt;
  opt.horizon_ticks = 0;
  EXPECT_THROW(sandbox_dryrun({}, w.state, w.instances, w.ctx, opt), ValidationError);
}

TEST(Sandbox, ViolatingProposalIsCounted) {
  SandboxWorld w;
  w.add("setpoint_high.json");
  const auto p = proposal(w.vnf, "setpoint-high", 1e9, 2000, 0);
  const SandboxResult r = sandbox_dryrun({p}, w.state, w.instances, w.ctx);
  EXPECT_GE(r.violation_count, 1u);
  EXPECT_FALSE(r.stable);
}

TEST(Tiers, PeriodsMustNestAndBePositive) {
  TierScheduler t;
  t.validate();
  t.access_period_ms = 5000;
  EXPECT_THROW(t.validate(), ValidationError);
  t = {};
  t.core_period_ms = 0;
  EXPECT_THROW(t.validate(), ValidationError);
}

TEST(Scheduler, PeriodsGiveTickCounts) {
  sdi::TopologyState live(sdi::Topology::preset("paper"));
  Orchestrator o(live, FunctionRegistry::with_builtins(), {});
  o.instantiate(observer("fast", 10));
  o.instantiate(observer("slow", 100));
  o.run(1000);
  EXPECT_EQ(count_events(o, "fast", "tick"), 100u);
  EXPECT_EQ(count_events(o, "slow", "tick"), 10u);
  EXPECT_EQ(o.clock_ms(), 1000);
  EXPECT_EQ(o.summary().invariant_failures, 0u);
}

TEST(Scheduler, EventsAreOrderedByTimeTierAndChain) {
  sdi::TopologyState live(sdi::Topology::preset("paper"));
  Orchestrator o(live, FunctionRegistry::with_builtins(), {});
  chain::MklChain access = observer("zz-access", 10);
  access.source_domain = {"toronto-vm5"};
  access.steps[0].qos.coverage = {"toronto"};
  access.steps[1].qos.coverage = {"toronto"};
  o.instantiate(access);
  o.instantiate(observer("aa-other", 10));
  o.instantiate(observer("bb-other", 10));
  o.run(50);
  for (std::size_t i = 1; i < o.trace().size(); ++i) {
    const TraceEvent& p = o.trace()[i - 1];
    const TraceEvent& e = o.trace()[i];
    ASSERT_LE(p.time_ms, e.time_ms);
    if (p.time_ms == e.time_ms && p.event == "tick" && e.event == "tick") {
      const int dp = sdi::tier_depth(p.tier), de = sdi::tier_depth(e.tier);
      EXPECT_TRUE(dp > de || (dp == de && p.chain < e.chain));
    }
  }
}

TEST(Scheduler, IdenticalRunsGiveIdenticalTraces) {
  auto run = [] {
    KnobWorld w;
    Orchestrator o(w.state, FunctionRegistry::with_builtins(), setpoint_catalog());
    o.instantiate(setpoint_chain("setpoint_high.json"));
    o.instantiate(setpoint_chain("setpoint_low.json"));
    o.run(20000);
    return std::make_pair(o.trace_csv(), o.fcaps_csv());
  };
  EXPECT_EQ(run(), run());
}

TEST(Scheduler, ArbitrationStopsReversals) {
  KnobWorld w;
  Orchestrator o(w.state, FunctionRegistry::with_builtins(), setpoint_catalog());
  o.instantiate(setpoint_chain("setpoint_high.json"));
  o.instantiate(setpoint_chain("setpoint_low.json"));
  o.run(100000);
  const RunSummary& s = o.summary();
  EXPECT_GE(s.first_decision_ms, 0);
  EXPECT_EQ(s.reversals_after_first_decision, 0u);
  EXPECT_EQ(s.invariant_failures, 0u);
  EXPECT_EQ(w.knob(), 3000);
}

TEST(Scheduler, UngatedLoopsOscillate) {
  KnobWorld w;
  OrchestratorOptions opt;
  opt.arbitration = false;
  opt.sandbox = false;
  Orchestrator o(w.state, FunctionRegistry::with_builtins(), setpoint_catalog(), opt);
  o.instantiate(setpoint_chain("setpoint_high.json"));
  o.instantiate(setpoint_chain("setpoint_low.json"));
  o.run(100000);
  EXPECT_GE(o.summary().reversals, 10u);
  EXPECT_EQ(o.summary().invariant_failures, 0u);
}

TEST(Scheduler, UnstableSandboxWithholdsTheBatch) {
  KnobWorld w;
  OrchestratorOptions opt;
  opt.arbitration = false;
  opt.sandbox = true;
  opt.sandbox_options.arbitrate = false;
  Orchestrator o(w.state, FunctionRegistry::with_builtins(), setpoint_catalog(), opt);
  o.instantiate(setpoint_chain("setpoint_high.json"));
  o.instantiate(setpoint_chain("setpoint_low.json"));
  o.run(5000);
  EXPECT_GT(o.summary().withheld, 0u);
  EXPECT_EQ(o.summary().applied, 0u);
  EXPECT_TRUE(o.knob_changes().empty());
  EXPECT_EQ(w.knob(), 2000);
  bool logged = false;
  for (const TraceEvent& e : o.trace()) logged = logged || e.event == "withheld";
  EXPECT_TRUE(logged);
}

TEST(Scheduler, TerminateReleasesReservations) {
  KnobWorld w;
  const sdi::TopologyState before = w.state;
  Orchestrator o(w.state, FunctionRegistry::with_builtins(), setpoint_catalog());
  o.instantiate(setpoint_chain("setpoint_high.json"));
  o.terminate("setpoint-high");
  EXPECT_EQ(w.state, before);
  EXPECT_THROW(o.instantiate(observer("dup", 10)); o.instantiate(observer("dup", 10)), Error);
}
