#include "aiaas/chain/embedding.hpp"

#include <algorithm>
#include <map>

#include "aiaas/chain/validate.hpp"
#include "aiaas/chain/verifier.hpp"
#include "aiaas/common/error.hpp"

namespace aiaas::chain {

std::string_view to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::Edge: return "edge";
    case ConnectionKind::SourceLeg: return "source";
    case ConnectionKind::DestinationLeg: return "destination";
  }
  return "?";
}

std::string_view to_string(EmbedStatus s) {
  switch (s) {
    case EmbedStatus::Embedded: return "embedded";
    case EmbedStatus::Infeasible: return "infeasible";
    case EmbedStatus::SearchExhausted: return "search-exhausted";
  }
  return "?";
}

const std::string& Embedding::node_of(const MklChain& chain, std::string_view step_id) const {
  return step_nodes.at(chain.step_index(step_id));
}

namespace {

constexpr const char* kStages[] = {"coverage", "cpu", "mem", "storage", "latency", "bandwidth", "reliability"};
constexpr int kStageCount = 7;

struct ChainShape {
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> preds;
  std::vector<bool> root;
  std::vector<bool> sink;  // sinks that get a destination leg
  std::vector<std::size_t> source;
  std::vector<std::size_t> destination;
};

ChainShape shape_of(const MklChain& chain, const sdi::Topology& topo) {
  ChainShape s;
  s.order = chain.topological_order();
  s.preds = chain.predecessors();
  const auto succ = chain.successors();
  s.root.resize(chain.steps.size());
  s.sink.resize(chain.steps.size());
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    s.root[i] = s.preds[i].empty();
    s.sink[i] = succ[i].empty() && chain.steps[i].kind != StepKind::Knowledge;
  }
  s.source = expand_domain(topo, chain.source_domain);
  s.destination = expand_domain(topo, chain.destination_domain);
  return s;
}

// Domain endpoint with the lowest route latency, ties by node id. Domains
// are sorted by node id, so the first strict minimum wins.
std::size_t nearest(const sdi::Topology& topo, const std::vector<std::size_t>& domain, std::size_t node,
                    bool into_node) {
  std::size_t best = domain.front();
  double best_latency = 0.0;
  bool first = true;
  for (std::size_t d : domain) {
    const double lat = into_node ? topo.route(d, node).latency_ms : topo.route(node, d).latency_ms;
    if (first || lat < best_latency) {
      best = d;
      best_latency = lat;
      first = false;
    }
  }
  return best;
}

// Connections leading into step `s` placed on `node`, given the nodes of
// already placed steps.
std::vector<Connection> connections_into(const MklChain& chain, const sdi::Topology& topo, const ChainShape& shape,
                                         std::size_t s, std::size_t node, const std::vector<std::size_t>& placed) {
  std::vector<Connection> out;
  const MklStep& step = chain.steps[s];
  const double node_rel = topo.nodes()[node].reliability;
  auto make = [&](ConnectionKind kind, std::size_t from, std::size_t to, std::string from_step) {
    const sdi::PathMetrics& p = topo.route(from, to);
    Connection c;
    c.kind = kind;
    c.from_node = topo.nodes()[from].id;
    c.to_node = topo.nodes()[to].id;
    c.step = step.id;
    c.from_step = std::move(from_step);
    c.latency_ms = p.latency_ms;
    c.reliability = p.reliability * node_rel;
    c.bandwidth = step.qos.min_bandwidth;
    c.links = p.links;
    out.push_back(std::move(c));
  };
  for (std::size_t p : shape.preds[s]) make(ConnectionKind::Edge, placed[p], node, chain.steps[p].id);
  if (shape.root[s] && !shape.source.empty()) {
    make(ConnectionKind::SourceLeg, nearest(topo, shape.source, node, true), node, {});
  }
  if (shape.sink[s] && !shape.destination.empty()) {
    make(ConnectionKind::DestinationLeg, node, nearest(topo, shape.destination, node, false), {});
  }
  return out;
}

class Search {
 public:
  Search(const MklChain& chain, const sdi::TopologyState& state, const ChainShape& shape, std::size_t budget)
      : chain_(chain),
        state_(state),
        topo_(state.topology()),
        shape_(shape),
        budget_(budget),
        placed_(chain.steps.size(), 0),
        node_extra_(topo_.size()),
        link_extra_(topo_.links().size(), 0) {
    for (const std::string& id : topo_.compute_node_ids()) candidates_.push_back(topo_.require_index(id));
  }

  EmbedStatus run() {
    const int r = place(0);
    if (r > 0) return EmbedStatus::Embedded;
    return r < 0 ? EmbedStatus::SearchExhausted : EmbedStatus::Infeasible;
  }

  const std::vector<std::size_t>& placed() const { return placed_; }
  std::size_t expansions() const { return expansions_; }
  const std::string& constraint() const { return constraint_; }
  const std::string& failed_step() const { return failed_step_; }

 private:
  struct Option {
    double added_latency;
    std::size_t node;
    std::vector<Connection> conns;
  };

  // Returns the stage index the candidate fails at, or kStageCount when it passes.
  int evaluate(std::size_t s, std::size_t node, std::vector<Connection>& conns, double& added) const {
    const MklStep& step = chain_.steps[s];
    const sdi::ComputeNode& n = topo_.nodes()[node];
    const auto& cov = step.qos.coverage;
    if (!cov.empty() && std::find(cov.begin(), cov.end(), n.region) == cov.end()) return 0;
    const sdi::ResourceVector free = state_.residual(node) - node_extra_[node];
    if (step.qos.cpu > free.cpu) return 1;
    if (step.qos.mem > free.mem) return 2;
    if (step.qos.storage > free.storage) return 3;
    conns = connections_into(chain_, topo_, shape_, s, node, placed_);
    added = 0.0;
    for (const Connection& c : conns) {
      if (!(c.latency_ms <= step.qos.max_latency_ms)) return 4;
      added += c.latency_ms;
    }
    if (step.qos.min_bandwidth > 0) {
      std::map<std::size_t, std::int64_t> need;
      for (const Connection& c : conns) {
        for (std::size_t l : c.links) need[l] += c.bandwidth;
      }
      for (const auto& [l, bw] : need) {
        if (state_.residual_bandwidth(l) - link_extra_[l] < bw) return 5;
      }
    }
    if (conns.empty()) {
      if (n.reliability < step.qos.min_reliability) return 6;
    } else {
      for (const Connection& c : conns) {
        if (c.reliability < step.qos.min_reliability) return 6;
      }
    }
    return kStageCount;
  }

  // 1 = solved, 0 = no solution below this point, -1 = budget exhausted.
  int place(std::size_t depth) {
    if (depth == shape_.order.size()) return 1;
    const std::size_t s = shape_.order[depth];
    const MklStep& step = chain_.steps[s];
    std::vector<Option> options;
    int furthest = -1;
    for (std::size_t node : candidates_) {
      Option o{0.0, node, {}};
      const int stage = evaluate(s, node, o.conns, o.added_latency);
      if (stage == kStageCount) {
        options.push_back(std::move(o));
      } else {
        furthest = std::max(furthest, stage);
      }
    }
    if (options.empty()) {
      if (constraint_.empty()) {
        constraint_ = furthest < 0 ? "coverage" : kStages[furthest];
        failed_step_ = step.id;
      }
      return 0;
    }
    std::stable_sort(options.begin(), options.end(), [this](const Option& a, const Option& b) {
      if (a.added_latency != b.added_latency) return a.added_latency < b.added_latency;
      return topo_.nodes()[a.node].id < topo_.nodes()[b.node].id;
    });
    for (const Option& o : options) {
      if (++expansions_ > budget_) return -1;
      placed_[s] = o.node;
      node_extra_[o.node] += step.qos.demand();
      for (const Connection& c : o.conns) {
        for (std::size_t l : c.links) link_extra_[l] += c.bandwidth;
      }
      const int r = place(depth + 1);
      if (r != 0) return r;
      node_extra_[o.node] -= step.qos.demand();
      for (const Connection& c : o.conns) {
        for (std::size_t l : c.links) link_extra_[l] -= c.bandwidth;
      }
    }
    return 0;
  }

  const MklChain& chain_;
  const sdi::TopologyState& state_;
  const sdi::Topology& topo_;
  const ChainShape& shape_;
  std::size_t budget_;
  std::vector<std::size_t> candidates_;
  std::vector<std::size_t> placed_;
  std::vector<sdi::ResourceVector> node_extra_;
  std::vector<std::int64_t> link_extra_;
  std::size_t expansions_ = 0;
  std::string constraint_;
  std::string failed_step_;
};

void require_valid(const MklChain& chain) {
  const ValidationReport report = validate_chain(chain);
  if (!report.valid()) {
    throw ValidationError("chain '" + chain.id + "' is invalid: " + report.errors().front());
  }
}

}  // namespace

Embedding describe_assignment(const MklChain& chain, const sdi::Topology& topology,
                              const std::vector<std::string>& step_nodes) {
  if (step_nodes.size() != chain.steps.size()) throw ValidationError("assignment size differs from step count");
  const ChainShape shape = shape_of(chain, topology);
  std::vector<std::size_t> placed(chain.steps.size());
  for (std::size_t i = 0; i < step_nodes.size(); ++i) placed[i] = topology.require_index(step_nodes[i]);
  Embedding e;
  e.chain_id = chain.id;
  e.step_nodes = step_nodes;
  for (std::size_t s : shape.order) {
    for (Connection& c : connections_into(chain, topology, shape, s, placed[s], placed)) {
      e.total_latency_ms += c.latency_ms;
      e.connections.push_back(std::move(c));
    }
  }
  return e;
}

void reserve_embedding(const MklChain& chain, sdi::TopologyState& state, Embedding& embedding,
                       const std::string& owner) {
  std::vector<std::string> made;
  try {
    embedding.step_allocations.assign(chain.steps.size(), {});
    embedding.link_allocations.clear();
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
      const auto& a = state.allocate(embedding.step_nodes[i], chain.steps[i].qos.demand(), owner);
      made.push_back(a.id);
      embedding.step_allocations[i] = a.id;
    }
    for (const Connection& c : embedding.connections) {
      if (c.bandwidth <= 0) continue;
      for (std::size_t l : c.links) {
        const auto& a = state.allocate_link(l, c.bandwidth, owner);
        made.push_back(a.id);
        embedding.link_allocations.push_back(a.id);
      }
    }
    embedding.owner = owner;
  } catch (...) {
    for (auto it = made.rbegin(); it != made.rend(); ++it) state.release(*it);
    embedding.step_allocations.clear();
    embedding.link_allocations.clear();
    throw;
  }
}

EmbedResult embed(const MklChain& chain, sdi::TopologyState& state, const EmbedOptions& options) {
  require_valid(chain);
  const ChainShape shape = shape_of(chain, state.topology());
  Search search(chain, state, shape, options.expansion_budget);
  EmbedResult result;
  result.status = search.run();
  result.expansions = search.expansions();
  if (result.status != EmbedStatus::Embedded) {
    result.constraint = result.status == EmbedStatus::SearchExhausted ? "search" : search.constraint();
    result.step = search.failed_step();
    return result;
  }
  std::vector<std::string> nodes;
  for (std::size_t n : search.placed()) nodes.push_back(state.topology().nodes()[n].id);
  result.embedding = describe_assignment(chain, state.topology(), nodes);
  if (options.reserve) {
    reserve_embedding(chain, state, result.embedding, options.owner.empty() ? chain.id : options.owner);
  }
  return result;
}

EmbedResult embed_bruteforce(const MklChain& chain, const sdi::TopologyState& state, std::uint64_t limit) {
  require_valid(chain);
  const std::vector<std::string> nodes = state.topology().compute_node_ids();
  const std::size_t k = chain.steps.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (nodes.empty() || total > limit / nodes.size()) {
      if (nodes.empty()) break;
      throw ValidationError("brute-force embedding: instance too large (" + std::to_string(nodes.size()) + "^" +
                            std::to_string(k) + " assignments)");
    }
    total *= nodes.size();
  }
  EmbedResult result;
  result.status = EmbedStatus::Infeasible;
  result.constraint = "infeasible";
  if (nodes.empty()) return result;

  std::vector<std::size_t> digits(k, 0);
  std::vector<std::string> assignment(k);
  bool found = false;
  double best = 0.0;
  std::vector<std::string> best_assignment;
  for (std::uint64_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < k; ++i) assignment[i] = nodes[digits[i]];
    ++result.expansions;
    const VerifyResult v = verify_assignment(chain, state, assignment);
    if (v.ok && (!found || v.total_latency_ms < best)) {
      found = true;
      best = v.total_latency_ms;
      best_assignment = assignment;
    }
    // Odometer with the first step most significant: lexicographic order.
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < nodes.size()) break;
      digits[i] = 0;
    }
  }
  if (found) {
    result.status = EmbedStatus::Embedded;
    result.constraint.clear();
    result.embedding = describe_assignment(chain, state.topology(), best_assignment);
  }
  return result;
}

}  // namespace aiaas::chain
