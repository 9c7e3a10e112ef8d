#include "aiaas/harness/scenarios.hpp"

#include <chrono>

namespace aiaas::harness {

RunReport run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  switch (config.scenario) {
    case Scenario::Compress: report = run_compress(config); break;
    case Scenario::AdaptiveVnf: report = run_adaptive_vnf(config); break;
    case Scenario::ConflictDemo: report = run_conflict_demo(config); break;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  finalize_report(report, config.output_dir);
  return report;
}

}  // namespace aiaas::harness
