#include "aiaas/control/conflicts.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <set>

#include "aiaas/chain/knobs.hpp"
#include "aiaas/common/error.hpp"

namespace aiaas::control {

std::string_view to_string(ConflictKind k) {
  return k == ConflictKind::SameKnobOpposing ? "same-knob-opposing" : "shared-resource-oversubscription";
}

namespace {

// Positive part of the reservation change a proposal would cause.
sdi::ResourceVector growth(const chain::ActionProposal& p, const sdi::TopologyState& state) {
  const sdi::Allocation* a = state.find_allocation(p.target);
  if (a == nullptr || a->link) return {};
  const auto& def = chain::require_knob(p.parameter);
  const std::int64_t now = chain::component_of(a->resources, def.component);
  const auto next = static_cast<std::int64_t>(std::llround(p.value));
  sdi::ResourceVector g;
  if (next > now) chain::set_component(g, def.component, next - now);
  return g;
}

bool any_positive(const sdi::ResourceVector& r) { return r.cpu > 0 || r.mem > 0 || r.storage > 0 || r.bandwidth > 0; }

bool within_window(const chain::ActionProposal& a, const chain::ActionProposal& b, std::int64_t window) {
  const std::int64_t d = a.timestamp_ms > b.timestamp_ms ? a.timestamp_ms - b.timestamp_ms : b.timestamp_ms - a.timestamp_ms;
  return d <= window;
}

}  // namespace

ConflictReport detect_conflicts(std::vector<chain::ActionProposal> proposals, std::int64_t window_ms,
                                const sdi::TopologyState& state) {
  ConflictReport report;
  report.window_ms = window_ms;
  report.proposals = std::move(proposals);
  const auto& ps = report.proposals;

  // Bucket by knob and by node so only plausible pairs are compared.
  std::map<std::string, std::vector<std::size_t>> by_knob;
  std::map<std::string, std::vector<std::size_t>> by_node;
  std::vector<sdi::ResourceVector> grow(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    by_knob[ps[i].knob_key()].push_back(i);
    grow[i] = growth(ps[i], state);
    if (any_positive(grow[i]) && state.topology().index_of(ps[i].node)) by_node[ps[i].node].push_back(i);
  }
  std::set<Conflict> found;
  for (const auto& [key, idx] : by_knob) {
    for (std::size_t x = 0; x < idx.size(); ++x) {
      for (std::size_t y = x + 1; y < idx.size(); ++y) {
        const auto& a = ps[idx[x]];
        const auto& b = ps[idx[y]];
        if (a.issued_by == b.issued_by || !within_window(a, b, window_ms)) continue;
        if (a.direction * b.direction < 0) found.insert({idx[x], idx[y], ConflictKind::SameKnobOpposing});
      }
    }
  }
  for (const auto& [node, idx] : by_node) {
    const sdi::ResourceVector free = state.residual(node);
    for (std::size_t x = 0; x < idx.size(); ++x) {
      for (std::size_t y = x + 1; y < idx.size(); ++y) {
        const auto& a = ps[idx[x]];
        const auto& b = ps[idx[y]];
        if (a.issued_by == b.issued_by || !within_window(a, b, window_ms)) continue;
        if (!(grow[idx[x]] + grow[idx[y]]).fits_within(free)) {
          found.insert({idx[x], idx[y], ConflictKind::SharedResourceOversubscription});
        }
      }
    }
  }
  report.conflicts.assign(found.begin(), found.end());
  return report;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ArbitrationResult arbitrate(const ConflictReport& report, const std::map<std::string, int>& priorities,
                            std::size_t first_pending, KnobLeases* leases) {
  const auto& ps = report.proposals;
  const std::size_t n = ps.size();
  ArbitrationResult result;

  std::vector<bool> excluded(n, false);
  std::vector<std::string> reason(n);
  for (std::size_t i = first_pending; i < n; ++i) {
    if (leases == nullptr) continue;
    auto it = leases->owner_of.find(ps[i].knob_key());
    if (it != leases->owner_of.end() && it->second != ps[i].issued_by) {
      excluded[i] = true;
      reason[i] = "knob leased to " + it->second;
    }
  }

  UnionFind uf(n);
  std::vector<bool> in_conflict(n, false);
  for (const Conflict& c : report.conflicts) {
    if (excluded[c.a] || excluded[c.b]) continue;
    uf.unite(c.a, c.b);
    in_conflict[c.a] = in_conflict[c.b] = true;
  }
  auto priority_of = [&](const std::string& chain) {
    auto it = priorities.find(chain);
    if (it == priorities.end()) throw ValidationError("chain '" + chain + "' has no priority");
    return it->second;
  };

  // Winner per set: lowest priority, then smallest chain id. A tie-break
  // is logged when another chain in the set has the winner's priority.
  std::map<std::size_t, std::string> winner;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_conflict[i]) continue;
    auto [it, fresh] = winner.emplace(uf.find(i), ps[i].issued_by);
    if (fresh) continue;
    const int pw = priority_of(it->second);
    const int pi = priority_of(ps[i].issued_by);
    if (pi < pw || (pi == pw && ps[i].issued_by < it->second)) it->second = ps[i].issued_by;
  }
  std::map<std::size_t, bool> tie;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_conflict[i]) continue;
    const std::size_t root = uf.find(i);
    const std::string& w = winner.at(root);
    tie[root] = tie[root] || (ps[i].issued_by != w && priority_of(ps[i].issued_by) == priority_of(w));
  }
  result.conflict_sets = winner.size();

  for (std::size_t i = first_pending; i < n; ++i) {
    Decision d;
    d.proposal = ps[i];
    if (excluded[i]) {
      d.approved = false;
      d.reason = reason[i];
    } else if (!in_conflict[i]) {
      d.approved = true;
      d.reason = "no conflict";
    } else {
      const std::size_t root = uf.find(i);
      const std::string& w = winner.at(root);
      const std::string how = tie.at(root) ? " by tie-break" : " on priority";
      if (ps[i].issued_by == w) {
        d.approved = true;
        d.reason = "won" + how;
      } else {
        d.approved = false;
        d.reason = "lost to " + w + how;
      }
    }
    if (d.approved) result.approved.push_back(ps[i]);
    result.decisions.push_back(std::move(d));
  }

  if (leases != nullptr) {
    for (const Conflict& c : report.conflicts) {
      if (c.kind != ConflictKind::SameKnobOpposing || excluded[c.a] || excluded[c.b]) continue;
      leases->owner_of[ps[c.a].knob_key()] = winner.at(uf.find(c.a));
    }
  }
  return result;
}

}  // namespace aiaas::control
