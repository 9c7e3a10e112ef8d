#include "aiaas/chain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aiaas/common/error.hpp"

namespace aiaas::chain {

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::Monitor: return "monitor";
    case StepKind::Analyze: return "analyze";
    case StepKind::Plan: return "plan";
    case StepKind::Execute: return "execute";
    case StepKind::Knowledge: return "knowledge";
  }
  return "?";
}

StepKind parse_step_kind(std::string_view text) {
  for (StepKind k : {StepKind::Monitor, StepKind::Analyze, StepKind::Plan, StepKind::Execute, StepKind::Knowledge}) {
    if (to_string(k) == text) return k;
  }
  throw ValidationError("unknown step kind '" + std::string(text) + "'");
}

int step_rank(StepKind k) {
  switch (k) {
    case StepKind::Monitor: return 0;
    case StepKind::Analyze: return 1;
    case StepKind::Plan: return 2;
    case StepKind::Execute: return 3;
    case StepKind::Knowledge: return -1;
  }
  return -1;
}

std::string_view to_string(Category c) { return c == Category::Nal ? "nal" : "ott"; }

Category parse_category(std::string_view text) {
  if (text == "nal" || text == "NAL") return Category::Nal;
  if (text == "ott" || text == "OTT") return Category::Ott;
  throw ValidationError("unknown chain category '" + std::string(text) + "'");
}

std::string QosRequirements::range_error() const {
  if (std::isnan(max_latency_ms) || max_latency_ms < 0.0) return "max_latency must be >= 0";
  if (min_bandwidth < 0) return "min_bandwidth must be >= 0";
  if (cpu < 0) return "cpu must be >= 0";
  if (mem < 0) return "mem must be >= 0";
  if (storage < 0) return "storage must be >= 0";
  if (!(min_reliability >= 0.0 && min_reliability <= 1.0)) return "min_reliability must be in [0, 1]";
  return {};
}

double MklStep::param_number(std::string_view key, double fallback) const {
  auto it = params.find(std::string(key));
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("step '" + id + "': parameter '" + std::string(key) + "' is not a number");
  }
}

std::string MklStep::param_text(std::string_view key, std::string_view fallback) const {
  auto it = params.find(std::string(key));
  return it == params.end() ? std::string(fallback) : it->second;
}

const MklStep* MklChain::find_step(std::string_view step_id) const {
  for (const MklStep& s : steps) {
    if (s.id == step_id) return &s;
  }
  return nullptr;
}

std::size_t MklChain::step_index(std::string_view step_id) const {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].id == step_id) return i;
  }
  throw NotFoundError("chain '" + id + "': unknown step '" + std::string(step_id) + "'");
}

bool MklChain::has_kind(StepKind k) const {
  return std::any_of(steps.begin(), steps.end(), [k](const MklStep& s) { return s.kind == k; });
}

std::vector<std::vector<std::size_t>> MklChain::predecessors() const {
  std::vector<std::vector<std::size_t>> preds(steps.size());
  for (const auto& [from, to] : edges) {
    const MklStep* a = find_step(from);
    const MklStep* b = find_step(to);
    if (a == nullptr || b == nullptr) continue;
    preds[step_index(to)].push_back(step_index(from));
  }
  return preds;
}

std::vector<std::vector<std::size_t>> MklChain::successors() const {
  std::vector<std::vector<std::size_t>> succ(steps.size());
  for (const auto& [from, to] : edges) {
    if (find_step(from) == nullptr || find_step(to) == nullptr) continue;
    succ[step_index(from)].push_back(step_index(to));
  }
  return succ;
}

std::vector<std::size_t> MklChain::topological_order() const {
  const auto succ = successors();
  std::vector<std::size_t> indegree(steps.size(), 0);
  for (const auto& list : succ) {
    for (std::size_t v : list) ++indegree[v];
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t u = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(u);
    for (std::size_t v : succ[u]) {
      if (--indegree[v] == 0) ready.insert(v);
    }
  }
  if (order.size() != steps.size()) throw ValidationError("chain '" + id + "' has a cycle");
  return order;
}

std::vector<std::pair<std::string, std::string>> default_edges(const std::vector<MklStep>& steps) {
  std::vector<std::pair<std::string, std::string>> edges;
  const MklStep* prev = nullptr;
  for (const MklStep& s : steps) {
    if (s.kind == StepKind::Knowledge) continue;
    if (prev != nullptr) edges.emplace_back(prev->id, s.id);
    prev = &s;
  }
  for (const MklStep& k : steps) {
    if (k.kind != StepKind::Knowledge) continue;
    for (const MklStep& s : steps) {
      if (s.kind == StepKind::Analyze || s.kind == StepKind::Plan) edges.emplace_back(s.id, k.id);
    }
  }
  return edges;
}

std::vector<std::size_t> expand_domain(const sdi::Topology& topology, const std::vector<std::string>& domain) {
  std::set<std::string> ids;
  for (const std::string& entry : domain) {
    if (topology.index_of(entry)) {
      ids.insert(entry);
      continue;
    }
    const auto members = topology.nodes_in_region(entry);
    if (members.empty()) throw NotFoundError("domain entry '" + entry + "' is neither a node nor a region");
    ids.insert(members.begin(), members.end());
  }
  std::vector<std::size_t> out;
  for (const std::string& id : ids) out.push_back(topology.require_index(id));
  return out;
}

}  // namespace aiaas::chain
