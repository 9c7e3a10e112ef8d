#include <gtest/gtest.h>

#include <functional>

#include "aiaas/common/error.hpp"
#include "aiaas/sdi/topology.hpp"
#include "aiaas/sdi/topology_io.hpp"
#include "aiaas/sdi/topology_state.hpp"
#include "generators.hpp"

using namespace aiaas;
using namespace aiaas::sdi;

namespace {

TopologySpec two_nodes() {
  TopologySpec s;
  s.regions = {"lab"};
  s.nodes = {{"a", "lab", Tier::Edge, 4000, 8192, 1000, 0.999, false},
             {"b", "lab", Tier::Edge, 4000, 8192, 1000, 0.999, false}};
  s.links = {{"a", "b", 100, 5.0, 0.99}};
  return s;
}

// Exhaustive simple-path search: minimum latency, then smallest id sequence.
PathMetrics oracle_route(const Topology& t, std::size_t src, std::size_t dst) {
  PathMetrics best;
  bool found = false;
  std::vector<bool> seen(t.size(), false);
  std::vector<std::string> ids{t.nodes()[src].id};
  std::vector<std::size_t> links;
  std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double latency) {
    if (u == dst) {
      if (!found || latency < best.latency_ms || (latency == best.latency_ms && ids < best.nodes)) {
        found = true;
        best.latency_ms = latency;
        best.nodes = ids;
        best.links = links;
      }
      return;
    }
    seen[u] = true;
    for (const auto& adj : t.neighbors(u)) {
      if (seen[adj.node]) continue;
      ids.push_back(t.nodes()[adj.node].id);
      links.push_back(adj.link);
      dfs(adj.node, latency + t.links()[adj.link].latency_ms);
      ids.pop_back();
      links.pop_back();
    }
    seen[u] = false;
  };
  dfs(src, 0.0);
  best.min_bandwidth = kUnboundedBandwidth;
  best.reliability = 1.0;
  for (std::size_t l : best.links) {
    best.min_bandwidth = std::min(best.min_bandwidth, t.links()[l].bandwidth);
    best.reliability *= t.links()[l].reliability;
  }
  return best;
}

void expect_route_matches_oracle(const Topology& t, std::size_t s, std::size_t d) {
  const PathMetrics want = oracle_route(t, s, d);
  const PathMetrics& got = t.route(s, d);
  EXPECT_EQ(got.nodes, want.nodes) << t.nodes()[s].id << " -> " << t.nodes()[d].id;
  EXPECT_EQ(got.latency_ms, want.latency_ms);
  EXPECT_EQ(got.min_bandwidth, want.min_bandwidth);
  EXPECT_NEAR(got.reliability, want.reliability, 1e-15);
}

}  // namespace

TEST(Topology, PaperPresetHas16VmsAnd9Switches) {
  const Topology t = Topology::preset("paper");
  EXPECT_EQ(t.compute_node_ids().size(), 16u);
  EXPECT_EQ(t.spec().switches.size(), 9u);
  EXPECT_EQ(t.size(), 25u);
  for (const auto& n : t.nodes()) {
    if (n.is_switch) {
      EXPECT_EQ(n.cpu_capacity, 0);
    }
  }
}

TEST(Topology, SingleNodeWithoutLinksIsValid) {
  const Topology t = Topology::preset("single");
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.route("n1", "n1").latency_ms, 0.0);
}

TEST(Topology, DanglingLinkEndpointIsRejected) {
  TopologySpec s = two_nodes();
  s.links.push_back({"a", "ghost", 10, 1.0, 1.0});
  EXPECT_THROW(Topology::build(s), ValidationError);
}

TEST(Topology, DisconnectedGraphIsRejected) {
  TopologySpec s = two_nodes();
  s.links.clear();
  EXPECT_THROW(Topology::build(s), ValidationError);
}

TEST(Topology, OutOfRangeAttributesAreRejected) {
  TopologySpec s = two_nodes();
  s.links[0].bandwidth = 0;
  EXPECT_THROW(Topology::build(s), ValidationError);
  s = two_nodes();
  s.nodes[0].reliability = 1.5;
  EXPECT_THROW(Topology::build(s), ValidationError);
  s = two_nodes();
  s.links[0].b = "a";
  EXPECT_THROW(Topology::build(s), ValidationError);
}

TEST(Route, SingleEdge) {
  const Topology t = Topology::build(two_nodes());
  const PathMetrics m = path_metrics(t, "a", "b");
  EXPECT_EQ(m.latency_ms, 5.0);
  EXPECT_EQ(m.min_bandwidth, 100);
  EXPECT_EQ(m.reliability, 0.99);
}

TEST(Route, TwoLinkComposition) {
  const Topology t = Topology::preset("line3");
  const PathMetrics m = path_metrics(t, "a", "c");
  EXPECT_EQ(m.latency_ms, 15.0);
  EXPECT_EQ(m.min_bandwidth, 50);
  EXPECT_NEAR(m.reliability, 0.9801, 1e-15);
  EXPECT_EQ(m.nodes, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Route, PaperPresetMatchesExhaustiveEnumeration) {
  const Topology t = Topology::preset("paper");
  for (std::size_t s = 0; s < t.size(); ++s) {
    for (std::size_t d = 0; d < t.size(); ++d) {
      if (s == d || t.nodes()[s].region == t.nodes()[d].region) continue;
      expect_route_matches_oracle(t, s, d);
    }
  }
}

TEST(Route, RandomGraphsMatchExhaustiveEnumeration) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const Topology t = Topology::build(testgen::random_topology(rng, 8));
    for (std::size_t s = 0; s < t.size(); ++s) {
      for (std::size_t d = 0; d < t.size(); ++d) {
        if (s != d) expect_route_matches_oracle(t, s, d);
      }
    }
  }
}

TEST(Route, EqualLatencyTieGoesToSmallerIdSequence) {
  TopologySpec s;
  s.regions = {"lab"};
  for (const char* id : {"src", "x", "y", "dst"}) s.nodes.push_back({id, "lab", Tier::Edge, 1000, 1000, 1000, 1.0, false});
  s.links = {{"src", "y", 10, 1.0, 1.0}, {"y", "dst", 10, 1.0, 1.0}, {"src", "x", 10, 1.0, 1.0},
             {"x", "dst", 10, 1.0, 1.0}};
  const Topology t = Topology::build(s);
  EXPECT_EQ(t.route("src", "dst").nodes, (std::vector<std::string>{"src", "x", "dst"}));
}

TEST(State, AllocateSubtractsFromResidual) {
  TopologyState st(Topology::preset("single"));
  st.allocate("n1", {1000, 0, 0, 0}, "vnf");
  EXPECT_EQ(st.residual("n1").cpu, 3000);
}

TEST(State, OverCapacityNamesCpu) {
  TopologyState st(Topology::preset("single"));
  try {
    st.allocate("n1", {5000, 0, 0, 0}, "vnf");
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.component(), "cpu");
    EXPECT_NE(std::string(e.what()).find("cpu"), std::string::npos);
  }
  EXPECT_TRUE(st.allocations().empty());
}

TEST(State, AllocateThenReleaseRestoresResiduals) {
  TopologyState st(Topology::preset("paper"));
  const TopologyState fresh = st;
  const std::string id = st.allocate("toronto-vm3", {1500, 1024, 2048, 100}, "vnf").id;
  st.release(id);
  EXPECT_EQ(st, fresh);
  EXPECT_EQ(st.residual("toronto-vm3"), fresh.residual("toronto-vm3"));
}

TEST(State, DoubleReleaseIsUnknownAllocation) {
  TopologyState st(Topology::preset("single"));
  const std::string id = st.allocate("n1", {100, 0, 0, 0}, "vnf").id;
  st.release(id);
  EXPECT_THROW(st.release(id), NotFoundError);
}

TEST(State, ReleaseAllEqualsFreshState) {
  TopologyState st(Topology::preset("line3"));
  const TopologyState fresh = st;
  st.allocate("a", {100, 10, 0, 0}, "x");
  st.allocate("b", {200, 20, 0, 0}, "y");
  st.allocate_link(1, 20, "x");
  EXPECT_EQ(st.release_owner("x"), 2u);
  EXPECT_EQ(st.release_owner("y"), 1u);
  EXPECT_EQ(st, fresh);
}

TEST(State, CloneIsolation) {
  TopologyState original(Topology::preset("paper"));
  original.allocate("core-vm1", {100, 100, 0, 0}, "a");
  const std::string before = original.serialize();
  TopologyState copy = original.clone();
  copy.allocate("core-vm2", {500, 0, 0, 0}, "b");
  copy.release_owner("a");
  EXPECT_EQ(original.serialize(), before);
  EXPECT_EQ(copy.clone().clone(), copy);
}

TEST(State, SerializeRoundTrip) {
  TopologyState st(Topology::preset("line3"));
  st.allocate("b", {1000, 512, 100, 10}, "svc");
  st.allocate_link(0, 30, "svc");
  const TopologyState back = TopologyState::deserialize(st.serialize());
  EXPECT_EQ(back, st);
  EXPECT_EQ(back.serialize(), st.serialize());
}

TEST(State, ResizeIsAllOrNothing) {
  TopologyState st(Topology::preset("single"));
  const std::string id = st.allocate("n1", {1000, 100, 0, 0}, "vnf").id;
  EXPECT_THROW(st.resize(id, {9000, 100, 0, 0}), CapacityError);
  EXPECT_EQ(st.allocation(id).resources.cpu, 1000);
  st.resize(id, {2500, 100, 0, 0});
  EXPECT_EQ(st.residual("n1").cpu, 1500);
}

TEST(State, PresetSpecRoundTripsThroughText) {
  const TopologySpec spec = Topology::preset("paper").spec();
  EXPECT_EQ(parse_topology_spec(render_topology_spec(spec)), spec);
}

// Conservation under random allocate/release/resize sequences.
TEST(StateProperty, ResidualPlusAllocationsEqualsCapacity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const Topology topo = Topology::build(testgen::random_topology(rng));
    TopologyState st(topo);
    const auto ids = topo.compute_node_ids();
    std::vector<std::string> live;
    for (int op = 0; op < 200; ++op) {
      const auto kind = rng.below(3);
      if (kind == 0 || live.empty()) {
        const std::string& node = ids[rng.below(ids.size())];
        const ResourceVector want{testgen::pick(rng, 0, 2000), testgen::pick(rng, 0, 3000), testgen::pick(rng, 0, 3000),
                                  0};
        try {
          live.push_back(st.allocate(node, want, "o" + std::to_string(rng.below(3))).id);
        } catch (const CapacityError&) {
        }
      } else if (kind == 1) {
        const auto i = rng.below(live.size());
        st.release(live[i]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        try {
          st.resize(live[rng.below(live.size())], {testgen::pick(rng, 0, 2000), 0, 0, 0});
        } catch (const CapacityError&) {
        }
      }
      ASSERT_TRUE(st.invariant_violations().empty());
    }
    for (std::size_t i = 0; i < topo.size(); ++i) {
      ResourceVector sum;
      for (const auto& [id, a] : st.allocations()) {
        if (a.node == topo.nodes()[i].id) sum += a.resources;
      }
      ResourceVector cap = topo.capacity(i);
      EXPECT_EQ(st.residual(i) + sum, cap) << "seed " << seed << " node " << topo.nodes()[i].id;
    }
  }
}

TEST(StateProperty, CloneMutationsNeverReachOriginal) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const Topology topo = Topology::build(testgen::random_topology(rng));
    TopologyState original = testgen::random_loaded_state(rng, topo, 3);
    const std::string before = original.serialize();
    TopologyState copy = original.clone();
    const auto ids = topo.compute_node_ids();
    for (int op = 0; op < 20; ++op) {
      try {
        copy.allocate(ids[rng.below(ids.size())], {testgen::pick(rng, 0, 500), 0, 0, 0}, "clone");
      } catch (const CapacityError&) {
      }
      if (testgen::coin(rng, 0.2)) copy.release_owner("vnf-0");
    }
    EXPECT_EQ(original.serialize(), before) << "seed " << seed;
  }
}
