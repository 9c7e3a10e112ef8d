#include "aiaas/harness/report.hpp"

#include <algorithm>
#include <sstream>

#include "aiaas/common/error.hpp"
#include "aiaas/metrics/csv.hpp"
#include "common/json_util.hpp"

namespace aiaas::harness {

using aiaas::detail::Json;
namespace fs = std::filesystem;

double RunReport::metric(std::string_view name) const {
  for (const Metric& m : metrics) {
    if (m.name == name) return m.value;
  }
  throw NotFoundError("report has no metric '" + std::string(name) + "'");
}

const Check& RunReport::check(std::string name, double value, std::string_view relation, double bound) {
  bool ok = false;
  if (relation == ">=") ok = value >= bound;
  else if (relation == ">") ok = value > bound;
  else if (relation == "<=") ok = value <= bound;
  else if (relation == "<") ok = value < bound;
  else if (relation == "==") ok = value == bound;
  else throw ValidationError("unknown relation '" + std::string(relation) + "'");
  checks.push_back({std::move(name), value, std::string(relation), bound, ok});
  return checks.back();
}

bool RunReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string RunReport::render_summary() const {
  std::ostringstream os;
  os << "scenario: " << to_string(scenario) << "\nseed: " << seed << "\n\nmetrics:\n";
  for (const Metric& m : metrics) os << "  " << m.name << " = " << metrics::format_double(m.value) << '\n';
  os << "\nchecks:\n";
  for (const Check& c : checks) {
    os << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << metrics::format_double(c.value) << ' '
       << c.relation << ' ' << metrics::format_double(c.bound) << '\n';
  }
  os << "\nfiles:\n";
  for (const ManifestEntry& f : files) {
    os << "  " << f.path;
    if (f.csv) os << " (" << f.rows << " rows)";
    os << '\n';
  }
  return os.str();
}

std::string RunReport::render_json() const {
  Json j;
  j["scenario"] = std::string(to_string(scenario));
  j["seed"] = seed;
  Json ms = Json::object();
  for (const Metric& m : metrics) ms[m.name] = m.value;
  j["metrics"] = ms;
  Json cs = Json::array();
  for (const Check& c : checks) {
    cs.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound},
                  {"passed", c.passed}});
  }
  j["checks"] = cs;
  Json fs_json = Json::array();
  for (const ManifestEntry& f : files) fs_json.push_back({{"path", f.path}, {"rows", f.rows}, {"csv", f.csv}});
  j["files"] = fs_json;
  return aiaas::detail::dump_canonical(j);
}

namespace {

std::size_t count_fields(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

// Data rows of a CSV text; throws ParseError on a ragged row.
std::size_t csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const std::size_t width = count_fields(line);
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (count_fields(line) != width) {
      throw ParseError(lineno, "expected " + std::to_string(width) + " fields, got " +
                                   std::to_string(count_fields(line)));
    }
    ++rows;
  }
  return rows;
}

}  // namespace

void write_output(RunReport& report, const fs::path& out_dir, const std::string& relative, const std::string& text,
                  bool csv) {
  aiaas::detail::write_text_file(out_dir / relative, text);
  report.files.push_back({relative, csv ? csv_rows(text) : 0, csv});
}

void finalize_report(const RunReport& report, const fs::path& out_dir) {
  aiaas::detail::write_text_file(out_dir / "summary.txt", report.render_summary());
  aiaas::detail::write_text_file(out_dir / "report.json", report.render_json());
}

std::vector<std::string> verify_manifest(const RunReport& report, const fs::path& out_dir) {
  std::vector<std::string> problems;
  for (const ManifestEntry& f : report.files) {
    const fs::path p = out_dir / f.path;
    if (!fs::exists(p)) {
      problems.push_back(f.path + ": missing");
      continue;
    }
    const std::string text = aiaas::detail::read_text_file(p);
    if (text.empty()) {
      problems.push_back(f.path + ": empty");
      continue;
    }
    if (!f.csv) continue;
    try {
      const std::size_t rows = csv_rows(text);
      if (rows != f.rows) {
        problems.push_back(f.path + ": " + std::to_string(rows) + " rows, manifest says " + std::to_string(f.rows));
      }
    } catch (const Error& e) {
      problems.push_back(f.path + ": " + e.what());
    }
  }
  return problems;
}

}  // namespace aiaas::harness
