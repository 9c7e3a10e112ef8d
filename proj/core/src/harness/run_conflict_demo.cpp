#include <algorithm>
#include <string>

#include "aiaas/control/scheduler.hpp"
#include "aiaas/harness/scenarios.hpp"
#include "aiaas/metrics/csv.hpp"
#include "aiaas/sdi/topology_io.hpp"

namespace aiaas::harness {

namespace {

std::string knobs_csv(const std::vector<control::KnobChange>& changes) {
  std::string out = "time_ms,knob,chain,before,after,reversal\n";
  for (const control::KnobChange& c : changes) {
    out += std::to_string(c.time_ms) + ',' + c.knob + ',' + c.chain + ',' + metrics::format_double(c.before) + ',' +
           metrics::format_double(c.after) + ',' + (c.reversal ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace

RunReport run_conflict_demo(const ScenarioConfig& config) {
  RunReport report;
  report.scenario = Scenario::ConflictDemo;
  report.seed = config.seed;
  const auto& out = config.output_dir;
  const ConflictParams& p = config.conflict;
  std::size_t invariant_failures = 0;
  std::size_t invariant_checks = 0;

  for (const bool gated : {false, true}) {
    const std::string mode = gated ? "on" : "off";
    sdi::TopologyState live(sdi::resolve_topology(config.topology));
    live.allocate(p.knob_node, {p.initial_millicores, 0, 0, 0}, p.knob_owner);

    control::OrchestratorOptions options;
    options.arbitration = gated;
    options.sandbox = gated;
    control::Orchestrator orch(live, control::FunctionRegistry::with_builtins(), config.catalog, options);
    for (const chain::MklChain& c : config.chains) orch.instantiate(c);
    std::int64_t period = 0;
    for (const control::MklInstance& inst : orch.instances()) {
      const std::int64_t q = orch.period_of(inst);
      period = period == 0 ? q : std::min(period, q);
    }
    orch.run(static_cast<std::int64_t>(p.ticks) * period);

    write_output(report, out, "trace_" + mode + ".csv", orch.trace_csv(), true);
    write_output(report, out, "knobs_" + mode + ".csv", knobs_csv(orch.knob_changes()), true);
    write_output(report, out, "fcaps_" + mode + ".csv", orch.fcaps_csv(), true);

    const control::RunSummary& s = orch.summary();
    const double per100 = static_cast<double>(s.reversals) * 100.0 / static_cast<double>(p.ticks);
    report.add_metric("ticks_" + mode, static_cast<double>(s.ticks));
    report.add_metric("proposals_" + mode, static_cast<double>(s.proposals));
    report.add_metric("conflicts_" + mode, static_cast<double>(s.conflicts));
    report.add_metric("applied_" + mode, static_cast<double>(s.applied));
    report.add_metric("rejected_" + mode, static_cast<double>(s.rejected));
    report.add_metric("withheld_" + mode, static_cast<double>(s.withheld));
    report.add_metric("reversals_" + mode, static_cast<double>(s.reversals));
    report.add_metric("reversals_per_100_ticks_" + mode, per100);
    report.add_metric("first_decision_ms_" + mode, static_cast<double>(s.first_decision_ms));
    report.add_metric("reversals_after_first_decision_" + mode, static_cast<double>(s.reversals_after_first_decision));
    invariant_failures += s.invariant_failures;
    invariant_checks += s.invariant_checks;
  }
  report.add_metric("invariant_checks", static_cast<double>(invariant_checks));
  report.add_metric("invariant_failures", static_cast<double>(invariant_failures));

  if (config.chains.size() >= 2) {
    report.check("reversals_per_100_ticks_off", report.metric("reversals_per_100_ticks_off"), ">=",
                 kMinReversalsPer100Ticks);
    report.check("reversals_after_first_decision_on", report.metric("reversals_after_first_decision_on"), "==", 0.0);
  } else {
    report.check("conflicts_off", report.metric("conflicts_off"), "==", 0.0);
    report.check("conflicts_on", report.metric("conflicts_on"), "==", 0.0);
  }
  report.check("invariant_failures", static_cast<double>(invariant_failures), "==", 0.0);
  return report;
}

}  // namespace aiaas::harness
