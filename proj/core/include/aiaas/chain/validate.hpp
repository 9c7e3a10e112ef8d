#pragma once

#include <map>
#include <string>
#include <vector>

#include "aiaas/chain/chain.hpp"

namespace aiaas::chain {

/// Step kind each named function may implement.
using FunctionSignatures = std::map<std::string, StepKind, std::less<>>;

/// monitor.scrape, monitor.knob, monitor.vnf_traffic,
/// analyze.autoencoder_compress, analyze.traffic_forecast, analyze.setpoint,
/// plan.catalog, execute.apply, knowledge.store.
const FunctionSignatures& builtin_function_signatures();

enum class Severity { Warning, Error };

struct ValidationIssue {
  Severity severity = Severity::Error;
  std::string code;  // e.g. "cycle", "ordering", "no_execute"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool valid() const;
  std::vector<std::string> errors() const;
  std::vector<std::string> warnings() const;
  bool has(std::string_view code) const;
};

/// Structural checks. Never throws; every problem is listed in the report.
///
/// Errors: empty id, no steps, duplicate or dangling step ids, cycles,
/// a loop-order inversion on any path (Monitor < Analyze < Plan < Execute,
/// Knowledge excluded), unknown function_ref or one whose kind differs from
/// the step, QoS out of range, negative tick period, more than one Knowledge
/// step, or a Knowledge step not reachable from every Analyze and Plan step.
/// Warnings: each missing Monitor / Analyze / Plan / Execute / Knowledge
/// step ("no Execute", ...).
ValidationReport validate_chain(const MklChain& chain,
                                const FunctionSignatures& signatures = builtin_function_signatures());

}  // namespace aiaas::chain
