#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aiaas/sdi/resources.hpp"
#include "aiaas/sdi/topology.hpp"

namespace aiaas::chain {

enum class StepKind { Monitor, Analyze, Plan, Execute, Knowledge };

std::string_view to_string(StepKind k);
StepKind parse_step_kind(std::string_view text);

/// Position in the loop order Monitor < Analyze < Plan < Execute. Knowledge
/// sits outside the order and has no rank.
int step_rank(StepKind k);

enum class Category { Nal, Ott };

std::string_view to_string(Category c);
Category parse_category(std::string_view text);

struct QosRequirements {
  double max_latency_ms = std::numeric_limits<double>::infinity();
  std::int64_t min_bandwidth = 0;  // Mb/s, reserved on every link into the step
  std::int64_t cpu = 0;            // millicores
  std::int64_t mem = 0;            // MiB
  std::int64_t storage = 0;        // MiB
  double min_reliability = 0.0;
  std::vector<std::string> coverage;  // allowed regions, empty = anywhere

  sdi::ResourceVector demand() const { return {cpu, mem, storage, 0}; }
  /// Empty when the ranges hold, otherwise a description of the first bad field.
  std::string range_error() const;

  friend bool operator==(const QosRequirements&, const QosRequirements&) = default;
};

struct MklStep {
  std::string id;
  StepKind kind = StepKind::Monitor;
  std::string function_ref;
  QosRequirements qos;
  /// Function parameters as text; numeric values use shortest round-trip
  /// formatting.
  std::map<std::string, std::string> params;

  double param_number(std::string_view key, double fallback) const;
  std::string param_text(std::string_view key, std::string_view fallback) const;

  friend bool operator==(const MklStep&, const MklStep&) = default;
};

struct MklChain {
  std::string id;
  std::vector<MklStep> steps;
  std::vector<std::pair<std::string, std::string>> edges;  // from step id, to step id
  std::vector<std::string> source_domain;       // node ids or region names
  std::vector<std::string> destination_domain;  // node ids or region names
  Category category = Category::Nal;
  int priority = 0;                 // lower wins arbitration
  std::int64_t tick_period_ms = 0;  // 0 = inherit the tier period

  const MklStep* find_step(std::string_view step_id) const;
  std::size_t step_index(std::string_view step_id) const;  // throws NotFoundError
  bool has_kind(StepKind k) const;

  /// Predecessor / successor indices per step, from `edges`. Unknown ids
  /// are skipped; validate_chain reports them.
  std::vector<std::vector<std::size_t>> predecessors() const;
  std::vector<std::vector<std::size_t>> successors() const;

  /// Kahn order preferring the earliest declared ready step. Throws
  /// ValidationError when the graph has a cycle.
  std::vector<std::size_t> topological_order() const;

  friend bool operator==(const MklChain&, const MklChain&) = default;
};

/// Edges of a straight chain over the non-Knowledge steps in declaration
/// order, plus an edge from every Analyze and Plan step into each
/// Knowledge step.
std::vector<std::pair<std::string, std::string>> default_edges(const std::vector<MklStep>& steps);

/// Node indices named by a domain: entries are node ids or region names
/// (every node of the region, switches included). Sorted by node id,
/// without duplicates. Throws NotFoundError for unknown entries.
std::vector<std::size_t> expand_domain(const sdi::Topology& topology, const std::vector<std::string>& domain);

}  // namespace aiaas::chain
