#include "aiaas/chain/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aiaas/common/error.hpp"

namespace aiaas::chain {

namespace {

VerifyResult fail(std::string constraint, std::string message) {
  VerifyResult r;
  r.ok = false;
  r.constraint = std::move(constraint);
  r.message = std::move(message);
  return r;
}

// Best endpoint of a domain: lowest route latency, then smallest node id.
std::string pick_endpoint(const sdi::Topology& topo, const std::vector<std::string>& domain_ids,
                          const std::string& node, bool into_node) {
  std::string best;
  double best_latency = 0.0;
  for (const std::string& d : domain_ids) {
    const double lat = into_node ? topo.route(d, node).latency_ms : topo.route(node, d).latency_ms;
    if (best.empty() || lat < best_latency || (lat == best_latency && d < best)) {
      best = d;
      best_latency = lat;
    }
  }
  return best;
}

std::vector<std::string> domain_ids(const sdi::Topology& topo, const std::vector<std::string>& domain) {
  std::vector<std::string> ids;
  for (const std::string& entry : domain) {
    if (topo.index_of(entry)) {
      ids.push_back(entry);
    } else {
      const auto members = topo.nodes_in_region(entry);
      if (members.empty()) throw NotFoundError("unknown domain entry '" + entry + "'");
      ids.insert(ids.end(), members.begin(), members.end());
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

VerifyResult verify_assignment(const MklChain& chain, const sdi::TopologyState& state,
                               const std::vector<std::string>& step_nodes) {
  const sdi::Topology& topo = state.topology();
  if (step_nodes.size() != chain.steps.size()) return fail("assignment", "assignment size differs from step count");

  std::map<std::string, sdi::ResourceVector> node_demand;
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const MklStep& step = chain.steps[i];
    const auto idx = topo.index_of(step_nodes[i]);
    if (!idx) return fail("assignment", "unknown node '" + step_nodes[i] + "'");
    const sdi::ComputeNode& n = topo.nodes()[*idx];
    if (n.is_switch) return fail("assignment", "step '" + step.id + "' placed on switch '" + n.id + "'");
    const auto& cov = step.qos.coverage;
    if (!cov.empty() && std::find(cov.begin(), cov.end(), n.region) == cov.end()) {
      return fail("coverage", "step '" + step.id + "' outside its coverage regions");
    }
    node_demand[n.id] += step.qos.demand();
  }
  for (const auto& [node, demand] : node_demand) {
    const sdi::ResourceVector free = state.residual(node);
    if (demand.cpu > free.cpu) return fail("cpu", "cpu demand exceeds residual on " + node);
    if (demand.mem > free.mem) return fail("mem", "mem demand exceeds residual on " + node);
    if (demand.storage > free.storage) return fail("storage", "storage demand exceeds residual on " + node);
  }

  // Enumerate connections straight from the definition.
  struct Leg {
    std::string from, to, step;
  };
  std::vector<Leg> legs;
  std::vector<bool> has_pred(chain.steps.size(), false);
  std::vector<bool> has_succ(chain.steps.size(), false);
  for (const auto& [from, to] : chain.edges) {
    const std::size_t a = chain.step_index(from);
    const std::size_t b = chain.step_index(to);
    has_pred[b] = true;
    has_succ[a] = true;
    legs.push_back({step_nodes[a], step_nodes[b], to});
  }
  const auto sources = domain_ids(topo, chain.source_domain);
  const auto sinks = domain_ids(topo, chain.destination_domain);
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    if (!has_pred[i] && !sources.empty()) {
      legs.push_back({pick_endpoint(topo, sources, step_nodes[i], true), step_nodes[i], chain.steps[i].id});
    }
    if (!has_succ[i] && chain.steps[i].kind != StepKind::Knowledge && !sinks.empty()) {
      legs.push_back({step_nodes[i], pick_endpoint(topo, sinks, step_nodes[i], false), chain.steps[i].id});
    }
  }

  VerifyResult ok;
  ok.ok = true;
  std::map<std::size_t, std::int64_t> link_demand;
  std::vector<bool> connected(chain.steps.size(), false);
  for (const Leg& leg : legs) {
    const std::size_t s = chain.step_index(leg.step);
    const MklStep& step = chain.steps[s];
    const std::string& step_node = step_nodes[s];
    const sdi::PathMetrics& p = topo.route(leg.from, leg.to);
    connected[s] = true;
    if (p.latency_ms > step.qos.max_latency_ms) {
      return fail("latency", "path " + leg.from + " -> " + leg.to + " exceeds max latency of '" + step.id + "'");
    }
    if (p.reliability * topo.node(step_node).reliability < step.qos.min_reliability) {
      return fail("reliability", "path into '" + step.id + "' below min reliability");
    }
    for (std::size_t l : p.links) link_demand[l] += step.qos.min_bandwidth;
    ok.total_latency_ms += p.latency_ms;
  }
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    if (!connected[i] && topo.node(step_nodes[i]).reliability < chain.steps[i].qos.min_reliability) {
      return fail("reliability", "node of '" + chain.steps[i].id + "' below min reliability");
    }
  }
  for (const auto& [l, bw] : link_demand) {
    if (bw > state.residual_bandwidth(l)) {
      return fail("bandwidth", "link " + std::to_string(l) + " oversubscribed by the chain");
    }
  }
  return ok;
}

VerifyResult verify_embedding(const MklChain& chain, const sdi::TopologyState& state_before,
                              const Embedding& embedding) {
  VerifyResult r = verify_assignment(chain, state_before, embedding.step_nodes);
  if (!r.ok) return r;
  double sum = 0.0;
  for (const Connection& c : embedding.connections) {
    const sdi::PathMetrics& p = state_before.topology().route(c.from_node, c.to_node);
    if (p.latency_ms != c.latency_ms || p.links != c.links) {
      return fail("record", "recorded connection " + c.from_node + " -> " + c.to_node + " differs from its route");
    }
    sum += c.latency_ms;
  }
  if (std::abs(sum - r.total_latency_ms) > 1e-9 || std::abs(sum - embedding.total_latency_ms) > 1e-9) {
    return fail("record", "recorded total latency differs from the connections");
  }
  return r;
}

}  // namespace aiaas::chain
