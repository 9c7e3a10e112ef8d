#include "aiaas/chain/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "aiaas/chain/chain.hpp"
#include "aiaas/chain/knobs.hpp"
#include "aiaas/common/error.hpp"
#include "aiaas/metrics/csv.hpp"

namespace aiaas::chain {

std::string ActionProposal::summary() const {
  std::string s = issued_by + " " + target + "@" + node + " " + parameter + "=" + metrics::format_double(value) +
                  " was=" + metrics::format_double(previous) + " dir=" + std::to_string(direction);
  if (clamped) s += " clamped";
  return s;
}

namespace {

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace

void CatalogEntry::validate() const {
  if (output_kind.empty()) throw ValidationError("catalog entry without output_kind");
  if (!starts_with(target_selector, "owner:") && !starts_with(target_selector, "allocation:")) {
    throw ValidationError("catalog entry '" + output_kind + "': selector must start with owner: or allocation:");
  }
  (void)require_knob(knob);
  if (!std::isfinite(scale) || !std::isfinite(offset) || !std::isfinite(min) || !std::isfinite(max) || min > max) {
    throw ValidationError("catalog entry '" + output_kind + "': bad transform or range");
  }
}

std::vector<const CatalogEntry*> Catalog::find(std::string_view output_kind) const {
  std::vector<const CatalogEntry*> out;
  for (const CatalogEntry& e : entries) {
    if (e.output_kind == output_kind) out.push_back(&e);
  }
  return out;
}

void Catalog::validate() const {
  for (const CatalogEntry& e : entries) e.validate();
}

std::vector<ActionProposal> catalog_translate(const Catalog& catalog, const AnalysisOutput& output,
                                              const std::vector<std::string>& destination_domain,
                                              const sdi::TopologyState& state, const std::string& issued_by) {
  const auto entries = catalog.find(output.kind);
  if (entries.empty()) throw NotFoundError("no catalog entry for analysis output '" + output.kind + "'");
  std::vector<std::string> allowed;
  for (std::size_t i : expand_domain(state.topology(), destination_domain)) {
    allowed.push_back(state.topology().nodes()[i].id);
  }

  std::vector<ActionProposal> out;
  for (const CatalogEntry* e : entries) {
    std::vector<const sdi::Allocation*> targets;
    if (starts_with(e->target_selector, "owner:")) {
      targets = state.allocations_of(e->target_selector.substr(6));
    } else if (const auto* a = state.find_allocation(e->target_selector.substr(11))) {
      targets.push_back(a);
    }
    for (const sdi::Allocation* a : targets) {
      if (a->link) continue;
      if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), a->node) == allowed.end()) continue;
      double v = e->scale * output.value + e->offset;
      if (e->integer) v = std::round(v);
      ActionProposal p;
      p.clamped = v < e->min || v > e->max;
      p.value = std::clamp(v, e->min, e->max);
      p.target = a->id;
      p.node = a->node;
      p.parameter = e->knob;
      p.previous = static_cast<double>(read_knob(state, a->id, e->knob));
      p.direction = p.value > p.previous ? 1 : (p.value < p.previous ? -1 : 0);
      p.issued_by = issued_by;
      p.timestamp_ms = output.timestamp_ms;
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace aiaas::chain
