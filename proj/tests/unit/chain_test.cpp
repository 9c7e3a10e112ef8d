#include <gtest/gtest.h>

#include <cmath>

#include "aiaas/chain/catalog.hpp"
#include "aiaas/chain/chain.hpp"
#include "aiaas/chain/chain_io.hpp"
#include "aiaas/chain/embedding.hpp"
#include "aiaas/chain/knobs.hpp"
#include "aiaas/chain/validate.hpp"
#include "aiaas/chain/verifier.hpp"
#include "aiaas/common/error.hpp"
#include "generators.hpp"

using namespace aiaas;
using namespace aiaas::chain;

namespace {

MklStep step(std::string id, StepKind kind, std::string fn, std::int64_t cpu = 0) {
  MklStep s;
  s.id = std::move(id);
  s.kind = kind;
  s.function_ref = std::move(fn);
  s.qos.cpu = cpu;
  return s;
}

MklChain mapek() {
  MklChain c;
  c.id = "loop";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob"), step("a", StepKind::Analyze, "analyze.setpoint"),
             step("p", StepKind::Plan, "plan.catalog"), step("e", StepKind::Execute, "execute.apply"),
             step("k", StepKind::Knowledge, "knowledge.store")};
  c.edges = default_edges(c.steps);
  return c;
}

sdi::TopologySpec pair_spec(std::int64_t cpu) {
  sdi::TopologySpec s;
  s.regions = {"lab"};
  s.nodes = {{"a", "lab", sdi::Tier::Edge, cpu, 4096, 4096, 0.999, false},
             {"b", "lab", sdi::Tier::Edge, cpu, 4096, 4096, 0.999, false}};
  s.links = {{"a", "b", 100, 2.0, 0.999}};
  return s;
}

}  // namespace

TEST(Validate, CanonicalLoopIsValid) {
  const ValidationReport r = validate_chain(mapek());
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(r.warnings().empty());
}

TEST(Validate, AnalysisOnlyChainWarnsNoExecute) {
  MklChain c;
  c.id = "observe";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob"), step("a", StepKind::Analyze, "analyze.setpoint")};
  c.edges = default_edges(c.steps);
  const ValidationReport r = validate_chain(c);
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(r.has("no_execute"));
  const auto w = r.warnings();
  EXPECT_NE(std::find(w.begin(), w.end(), "no Execute"), w.end());
}

TEST(Validate, ExecuteBeforeAnalyzeIsAnOrderingViolation) {
  MklChain c;
  c.id = "bad";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob"), step("e", StepKind::Execute, "execute.apply"),
             step("a", StepKind::Analyze, "analyze.setpoint")};
  c.edges = default_edges(c.steps);
  const ValidationReport r = validate_chain(c);
  EXPECT_FALSE(r.valid());
  EXPECT_TRUE(r.has("ordering"));
}

TEST(Validate, StructuralErrors) {
  MklChain c = mapek();
  c.edges.push_back({"e", "m"});
  EXPECT_TRUE(validate_chain(c).has("cycle"));
  c = mapek();
  c.steps[1].function_ref = "plan.catalog";
  EXPECT_TRUE(validate_chain(c).has("kind_mismatch"));
  c = mapek();
  c.edges.push_back({"m", "ghost"});
  EXPECT_TRUE(validate_chain(c).has("dangling_edge"));
  c = mapek();
  c.steps.push_back(step("k2", StepKind::Knowledge, "knowledge.store"));
  EXPECT_TRUE(validate_chain(c).has("knowledge_count"));
  c = mapek();
  c.steps[0].qos.min_reliability = 2.0;
  EXPECT_TRUE(validate_chain(c).has("qos_range"));
}

TEST(ChainIo, RoundTrip) {
  MklChain c = mapek();
  c.priority = 2;
  c.tick_period_ms = 500;
  c.source_domain = {"core"};
  c.steps[0].qos.max_latency_ms = 12.5;
  c.steps[0].qos.coverage = {"toronto"};
  c.steps[1].params["target"] = "3000";
  EXPECT_EQ(parse_chain(render_chain(c)), c);
  EXPECT_THROW(parse_chain("{"), ParseError);
}

TEST(Embed, SingleStepGoesToMinimumLatencyNode) {
  sdi::TopologyState st(sdi::Topology::preset("line3"));
  MklChain c;
  c.id = "one";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob", 1000)};
  c.source_domain = {"c"};
  const EmbedResult r = embed(c, st);
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.embedding.step_nodes[0], "c");
  EXPECT_EQ(st.residual("c").cpu, 3000);
}

TEST(Embed, SkipsNodesWithoutCapacity) {
  sdi::TopologyState st(sdi::Topology::preset("line3"));
  st.allocate("c", {3500, 0, 0, 0}, "other");
  MklChain c;
  c.id = "one";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob", 1000)};
  c.source_domain = {"c"};
  const EmbedResult r = embed(c, st);
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.embedding.step_nodes[0], "b");
}

TEST(Embed, OversizedCpuDemandIsInfeasibleNamingCpu) {
  sdi::TopologyState st(sdi::Topology::preset("paper"));
  const std::string before = st.serialize();
  MklChain c;
  c.id = "huge";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob", 100000)};
  const EmbedResult r = embed(c, st);
  EXPECT_EQ(r.status, EmbedStatus::Infeasible);
  EXPECT_EQ(r.constraint, "cpu");
  EXPECT_EQ(st.serialize(), before);
  EXPECT_FALSE(embed_bruteforce(c, st).feasible());
}

TEST(Bruteforce, EnumeratesEveryAssignment) {
  const sdi::TopologyState st(sdi::Topology::build(pair_spec(4000)));
  MklChain c;
  c.id = "two";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob", 100), step("a", StepKind::Analyze, "analyze.setpoint", 100)};
  c.edges = default_edges(c.steps);
  const EmbedResult r = embed_bruteforce(c, st);
  EXPECT_EQ(r.expansions, 4u);
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.embedding.total_latency_ms, 0.0);
  EXPECT_EQ(r.embedding.step_nodes, (std::vector<std::string>{"a", "a"}));
}

TEST(Bruteforce, SplitsWhenOneNodeCannotHoldBoth) {
  const sdi::TopologyState st(sdi::Topology::build(pair_spec(1000)));
  MklChain c;
  c.id = "two";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob", 800), step("a", StepKind::Analyze, "analyze.setpoint", 800)};
  c.edges = default_edges(c.steps);
  const EmbedResult r = embed_bruteforce(c, st);
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.embedding.total_latency_ms, 2.0);
  EXPECT_EQ(r.embedding.step_nodes, (std::vector<std::string>{"a", "b"}));
  c.steps[0].qos.cpu = 1200;
  EXPECT_FALSE(embed_bruteforce(c, st).feasible());
}

TEST(Bruteforce, RefusesOversizedInstances) {
  const sdi::TopologyState st(sdi::Topology::preset("paper"));
  EXPECT_THROW(embed_bruteforce(mapek(), st, 1000), ValidationError);
}

TEST(Verifier, CatchesViolations) {
  const sdi::TopologyState st(sdi::Topology::build(pair_spec(1000)));
  MklChain c;
  c.id = "two";
  c.steps = {step("m", StepKind::Monitor, "monitor.knob", 800), step("a", StepKind::Analyze, "analyze.setpoint", 800)};
  c.edges = default_edges(c.steps);
  const VerifyResult same = verify_assignment(c, st, {"a", "a"});
  EXPECT_FALSE(same.ok);
  EXPECT_EQ(same.constraint, "cpu");
  c.steps[1].qos.max_latency_ms = 1.0;
  EXPECT_EQ(verify_assignment(c, st, {"a", "b"}).constraint, "latency");
  c.steps[1].qos.max_latency_ms = 5.0;
  c.steps[1].qos.min_bandwidth = 200;
  EXPECT_EQ(verify_assignment(c, st, {"a", "b"}).constraint, "bandwidth");
}

// Greedy with backtracking against exhaustive search on small instances.
TEST(EmbedProperty, AgreesWithBruteForce) {
  std::size_t feasible = 0;
  std::size_t within_bound = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const sdi::Topology topo = sdi::Topology::build(testgen::random_topology(rng));
    sdi::TopologyState st = testgen::random_loaded_state(rng, topo, static_cast<int>(rng.below(3)));
    const MklChain c = testgen::random_chain(rng, topo);
    ASSERT_TRUE(validate_chain(c).valid()) << "seed " << seed;
    const std::string before = st.serialize();

    const EmbedResult oracle = embed_bruteforce(c, st);
    const sdi::TopologyState snapshot = st;
    const EmbedResult got = embed(c, st);
    ASSERT_NE(got.status, EmbedStatus::SearchExhausted);
    EXPECT_EQ(got.feasible(), oracle.feasible()) << "seed " << seed;
    if (!got.feasible()) {
      EXPECT_EQ(st.serialize(), before) << "seed " << seed;
      continue;
    }
    ++feasible;
    const VerifyResult v = verify_embedding(c, snapshot, got.embedding);
    EXPECT_TRUE(v.ok) << "seed " << seed << ": " << v.message;
    EXPECT_TRUE(st.invariant_violations().empty());
    if (got.embedding.total_latency_ms <= 1.5 * oracle.embedding.total_latency_ms + 1e-9) ++within_bound;
  }
  ASSERT_GT(feasible, 0u);
  EXPECT_GE(static_cast<double>(within_bound), 0.9 * static_cast<double>(feasible));
}

TEST(EmbedProperty, FailedEmbedLeavesStateUntouched) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 1000);
    const sdi::Topology topo = sdi::Topology::build(testgen::random_topology(rng));
    sdi::TopologyState st = testgen::random_loaded_state(rng, topo, 2);
    MklChain c = testgen::random_chain(rng, topo);
    c.steps.back().qos.cpu = 1000000;
    const std::string before = st.serialize();
    EXPECT_FALSE(embed(c, st).feasible());
    EXPECT_EQ(st.serialize(), before);
  }
}

TEST(Knobs, ReadWriteAndCapacity) {
  sdi::TopologyState st(sdi::Topology::preset("single"));
  const std::string id = st.allocate("n1", {1000, 256, 0, 0}, "vnf").id;
  EXPECT_EQ(read_knob(st, id, "vnf.cpu.millicores"), 1000);
  write_knob(st, id, "vnf.cpu.millicores", 2500);
  EXPECT_EQ(st.residual("n1").cpu, 1500);
  EXPECT_THROW(write_knob(st, id, "vnf.cpu.millicores", 9000), CapacityError);
  EXPECT_EQ(read_knob(st, id, "vnf.cpu.millicores"), 2500);
  EXPECT_THROW(read_knob(st, id, "vnf.gpu"), NotFoundError);
}

TEST(Catalog, LinearTrafficToCpu) {
  sdi::TopologyState st(sdi::Topology::preset("paper"));
  st.allocate("waterloo-vm4", {1000, 0, 0, 0}, "vnf-firewall");
  const double slope = 0.012, intercept = 0.1, capacity = 3000;
  const Catalog cat{{{"traffic_forecast_peak", "owner:vnf-firewall", "vnf.cpu.millicores", slope * capacity,
                      intercept * capacity, 250, 4000, true}}};
  const auto ps = catalog_translate(cat, {"traffic_forecast_peak", 50.0, 600}, {}, st, "vnf-autoscale");
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].value, std::round((slope * 50 + intercept) * capacity));
  EXPECT_EQ(ps[0].previous, 1000.0);
  EXPECT_EQ(ps[0].direction, 1);
  EXPECT_FALSE(ps[0].clamped);
  EXPECT_EQ(ps[0].issued_by, "vnf-autoscale");
  EXPECT_EQ(ps[0].timestamp_ms, 600);
}

TEST(Catalog, AboveMaxIsClampedAndFlagged) {
  sdi::TopologyState st(sdi::Topology::preset("single"));
  st.allocate("n1", {1000, 0, 0, 0}, "vnf");
  const Catalog cat{{{"load", "owner:vnf", "vnf.cpu.millicores", 100, 0, 0, 2000, true}}};
  const auto ps = catalog_translate(cat, {"load", 50.0, 0}, {}, st, "c");
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].value, 2000.0);
  EXPECT_TRUE(ps[0].clamped);
}

TEST(Catalog, UnknownOutputKindIsNotFound) {
  const sdi::TopologyState st(sdi::Topology::preset("single"));
  const Catalog cat{{{"load", "owner:vnf", "vnf.cpu.millicores", 1, 0, 0, 10, true}}};
  EXPECT_THROW(catalog_translate(cat, {"mystery", 1.0, 0}, {}, st, "c"), NotFoundError);
}

TEST(Catalog, BadEntriesAreRejected) {
  CatalogEntry e{"load", "owner:vnf", "vnf.cpu.millicores", 1, 0, 10, 0, true};
  EXPECT_THROW(e.validate(), ValidationError);
  e = {"load", "node:vnf", "vnf.cpu.millicores", 1, 0, 0, 10, true};
  EXPECT_THROW(e.validate(), ValidationError);
  e = {"load", "owner:vnf", "vnf.gpu", 1, 0, 0, 10, true};
  EXPECT_THROW(e.validate(), Error);
}

TEST(Catalog, RoundTrip) {
  const Catalog cat{{{"load", "allocation:alloc-000001", "vnf.mem.mib", 0.5, 3, 0, 10, false}}};
  EXPECT_EQ(parse_catalog(render_catalog(cat)), cat);
}
