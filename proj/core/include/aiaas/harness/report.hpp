#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aiaas/harness/config.hpp"

namespace aiaas::harness {

struct Metric {
  std::string name;
  double value = 0.0;
};

/// A file written by a run. `rows` counts data rows below the header for
/// CSV files and is 0 for other files.
struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::size_t rows = 0;
  bool csv = false;
};

/// A scenario threshold; `--strict` turns a failed check into exit code 4.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // ">=", "<", "==", ...
  double bound = 0.0;
  bool passed = false;
};

struct RunReport {
  Scenario scenario = Scenario::Compress;
  std::uint64_t seed = 0;
  std::vector<Metric> metrics;
  std::vector<Check> checks;
  std::vector<ManifestEntry> files;
  double wall_seconds = 0.0;  // printed, never written

  /// Throws NotFoundError for an unknown name.
  double metric(std::string_view name) const;
  void add_metric(std::string name, double value) { metrics.push_back({std::move(name), value}); }
  /// Records a check of `value relation bound`.
  const Check& check(std::string name, double value, std::string_view relation, double bound);
  bool all_checks_passed() const;

  /// Plain-text summary: headline metrics, checks and the manifest.
  std::string render_summary() const;
  /// JSON document with the same content as the summary.
  std::string render_json() const;
};

/// Writes `text` under `out_dir` and adds it to the manifest.
void write_output(RunReport& report, const std::filesystem::path& out_dir, const std::string& relative,
                  const std::string& text, bool csv);

/// Writes summary.txt and report.json next to the manifest files.
void finalize_report(const RunReport& report, const std::filesystem::path& out_dir);

/// Re-reads every manifest file and returns one message per problem: a
/// missing or empty file, or a CSV whose data row count differs.
std::vector<std::string> verify_manifest(const RunReport& report, const std::filesystem::path& out_dir);

}  // namespace aiaas::harness
