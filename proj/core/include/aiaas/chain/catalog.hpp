#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::chain {

/// Output of an Analyze step, e.g. {"traffic_forecast_peak", 72.5}.
struct AnalysisOutput {
  std::string kind;
  double value = 0.0;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const AnalysisOutput&, const AnalysisOutput&) = default;
};

/// One Plan output: set `parameter` on allocation `target` to `value`.
struct ActionProposal {
  std::string target;     // allocation id
  std::string node;       // node holding the allocation
  std::string parameter;  // knob name
  double value = 0.0;
  double previous = 0.0;  // knob value when the proposal was issued
  int direction = 0;      // sign(value - previous)
  bool clamped = false;
  std::string issued_by;  // chain id
  std::int64_t timestamp_ms = 0;

  /// "target/parameter", the identity of the written knob.
  std::string knob_key() const { return target + "/" + parameter; }
  /// Compact single-line form for traces; contains no commas or quotes.
  std::string summary() const;

  friend bool operator==(const ActionProposal&, const ActionProposal&) = default;
};

/// Affine map from an analysis value to a knob setting:
/// value = clamp(round?(scale * x + offset), min, max).
struct CatalogEntry {
  std::string output_kind;
  /// "owner:<name>" (every node allocation of that owner) or
  /// "allocation:<id>".
  std::string target_selector;
  std::string knob;
  double scale = 1.0;
  double offset = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool integer = true;

  /// Throws ValidationError on a bad selector, unknown knob or min > max.
  void validate() const;

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

struct Catalog {
  std::vector<CatalogEntry> entries;

  std::vector<const CatalogEntry*> find(std::string_view output_kind) const;
  void validate() const;

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

/// One proposal per target matched by each entry for the output kind,
/// restricted to allocations on nodes of `destination_domain` when it is not
/// empty. Targets are visited in allocation-id order. Throws NotFoundError
/// when no entry handles the output kind.
std::vector<ActionProposal> catalog_translate(const Catalog& catalog, const AnalysisOutput& output,
                                              const std::vector<std::string>& destination_domain,
                                              const sdi::TopologyState& state, const std::string& issued_by);

}  // namespace aiaas::chain
