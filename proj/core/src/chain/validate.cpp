#include "aiaas/chain/validate.hpp"

#include <algorithm>
#include <set>

namespace aiaas::chain {

const FunctionSignatures& builtin_function_signatures() {
  static const FunctionSignatures table{
      {"monitor.scrape", StepKind::Monitor},
      {"monitor.knob", StepKind::Monitor},
      {"monitor.vnf_traffic", StepKind::Monitor},
      {"analyze.autoencoder_compress", StepKind::Analyze},
      {"analyze.traffic_forecast", StepKind::Analyze},
      {"analyze.setpoint", StepKind::Analyze},
      {"plan.catalog", StepKind::Plan},
      {"execute.apply", StepKind::Execute},
      {"knowledge.store", StepKind::Knowledge},
  };
  return table;
}

bool ValidationReport::valid() const {
  return std::none_of(issues.begin(), issues.end(),
                      [](const ValidationIssue& i) { return i.severity == Severity::Error; });
}

std::vector<std::string> ValidationReport::errors() const {
  std::vector<std::string> out;
  for (const auto& i : issues) {
    if (i.severity == Severity::Error) out.push_back(i.message);
  }
  return out;
}

std::vector<std::string> ValidationReport::warnings() const {
  std::vector<std::string> out;
  for (const auto& i : issues) {
    if (i.severity == Severity::Warning) out.push_back(i.message);
  }
  return out;
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(issues.begin(), issues.end(), [code](const ValidationIssue& i) { return i.code == code; });
}

namespace {

// Reachability closure by DFS from each node; chains are small.
std::vector<std::vector<bool>> reachability(const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack(succ[s].begin(), succ[s].end());
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      if (reach[s][u]) continue;
      reach[s][u] = true;
      stack.insert(stack.end(), succ[u].begin(), succ[u].end());
    }
  }
  return reach;
}

}  // namespace

ValidationReport validate_chain(const MklChain& chain, const FunctionSignatures& signatures) {
  ValidationReport report;
  auto error = [&](std::string code, std::string msg) {
    report.issues.push_back({Severity::Error, std::move(code), std::move(msg)});
  };
  auto warn = [&](std::string code, std::string msg) {
    report.issues.push_back({Severity::Warning, std::move(code), std::move(msg)});
  };

  if (chain.id.empty()) error("chain_id", "chain id is empty");
  if (chain.steps.empty()) {
    error("no_steps", "chain has no steps");
    return report;
  }
  if (chain.tick_period_ms < 0) error("tick_period", "tick_period must be >= 0");

  std::set<std::string> seen;
  for (const MklStep& s : chain.steps) {
    if (s.id.empty()) error("step_id", "step with empty id");
    if (!seen.insert(s.id).second) error("duplicate_step", "duplicate step id '" + s.id + "'");
    auto sig = signatures.find(s.function_ref);
    if (sig == signatures.end()) {
      error("unknown_function", "step '" + s.id + "': unknown function '" + s.function_ref + "'");
    } else if (sig->second != s.kind) {
      error("kind_mismatch", "step '" + s.id + "': function '" + s.function_ref + "' implements " +
                                 std::string(to_string(sig->second)) + ", not " + std::string(to_string(s.kind)));
    }
    if (auto bad = s.qos.range_error(); !bad.empty()) error("qos_range", "step '" + s.id + "': " + bad);
  }
  for (const auto& [from, to] : chain.edges) {
    if (chain.find_step(from) == nullptr || chain.find_step(to) == nullptr) {
      error("dangling_edge", "edge " + from + " -> " + to + " names an unknown step");
    } else if (from == to) {
      error("cycle", "self-loop on step '" + from + "'");
    }
  }
  if (report.has("duplicate_step")) return report;

  const auto succ = chain.successors();
  bool acyclic = true;
  try {
    (void)chain.topological_order();
  } catch (const std::exception&) {
    acyclic = false;
    if (!report.has("cycle")) error("cycle", "step graph has a cycle");
  }

  const auto reach = reachability(succ);
  const std::size_t n = chain.steps.size();
  if (acyclic) {
    for (std::size_t u = 0; u < n; ++u) {
      const int ru = step_rank(chain.steps[u].kind);
      if (ru < 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        const int rv = step_rank(chain.steps[v].kind);
        if (rv < 0 || !reach[u][v] || ru <= rv) continue;
        error("ordering", "step '" + chain.steps[u].id + "' (" + std::string(to_string(chain.steps[u].kind)) +
                              ") precedes '" + chain.steps[v].id + "' (" +
                              std::string(to_string(chain.steps[v].kind)) + ")");
      }
    }
  }

  std::vector<std::size_t> knowledge;
  for (std::size_t i = 0; i < n; ++i) {
    if (chain.steps[i].kind == StepKind::Knowledge) knowledge.push_back(i);
  }
  if (knowledge.size() > 1) {
    error("knowledge_count", "chain has " + std::to_string(knowledge.size()) + " Knowledge steps, expected one");
  } else if (knowledge.size() == 1) {
    const std::size_t k = knowledge.front();
    for (std::size_t i = 0; i < n; ++i) {
      const StepKind kind = chain.steps[i].kind;
      if ((kind == StepKind::Analyze || kind == StepKind::Plan) && !reach[i][k]) {
        error("knowledge_unreachable",
              "Knowledge step '" + chain.steps[k].id + "' is not reachable from '" + chain.steps[i].id + "'");
      }
    }
  }

  if (!chain.has_kind(StepKind::Monitor)) warn("no_monitor", "no Monitor");
  if (!chain.has_kind(StepKind::Analyze)) warn("no_analyze", "no Analyze");
  if (!chain.has_kind(StepKind::Plan)) warn("no_plan", "no Plan");
  if (!chain.has_kind(StepKind::Execute)) warn("no_execute", "no Execute");
  if (knowledge.empty()) warn("no_knowledge", "no Knowledge");
  return report;
}

}  // namespace aiaas::chain
