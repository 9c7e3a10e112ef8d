// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   acceptance [output-root]

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <utility>
#include <vector>
#include <iostream>
#include <sstream>
#include <string>

#include "aiaas/ai/autoencoder.hpp"
#include "aiaas/chain/embedding.hpp"
#include "aiaas/harness/scenarios.hpp"
#include "generators.hpp"
#include "gradcheck.hpp"

namespace fs = std::filesystem;
using namespace aiaas;

namespace {

const fs::path kConfigs = AIAAS_CONFIG_DIR;

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  if (!o.passed) ++failures;
  std::cout << "AC" << id << ' ' << (o.passed ? "PASS" : "FAIL") << ' ' << name << ": " << o.detail << std::endl;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t fnv1a(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Run {
  harness::RunReport report;
  fs::path out;
  double seconds = 0.0;
};

Run run(const std::string& config, const fs::path& out) {
  harness::ScenarioConfig c = harness::load_config(kConfigs / config);
  fs::remove_all(out);
  c.output_dir = out;
  const auto t0 = std::chrono::steady_clock::now();
  Run r{harness::run_scenario(c), out, 0.0};
  r.seconds = seconds_since(t0);
  return r;
}

// Every written file, including summary.txt and report.json.
std::vector<std::string> outputs(const Run& r) {
  std::vector<std::string> files{"summary.txt", "report.json"};
  for (const auto& f : r.report.files) files.push_back(f.path);
  return files;
}

Outcome ac6_embedding() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t agree = 0, feasible = 0, within = 0;
  std::string outliers;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const sdi::Topology topo = sdi::Topology::build(testgen::random_topology(rng));
    sdi::TopologyState st = testgen::random_loaded_state(rng, topo, static_cast<int>(rng.below(3)));
    const chain::MklChain c = testgen::random_chain(rng, topo);
    const chain::EmbedResult oracle = chain::embed_bruteforce(c, st);
    const chain::EmbedResult got = chain::embed(c, st, {100000, {}, false});
    if (got.feasible() == oracle.feasible()) ++agree;
    if (got.feasible() && oracle.feasible()) {
      ++feasible;
      const double ratio = got.embedding.total_latency_ms / std::max(oracle.embedding.total_latency_ms, 1e-12);
      if (got.embedding.total_latency_ms <= 1.5 * oracle.embedding.total_latency_ms + 1e-9)
        ++within;
      else
        outliers += " seed " + std::to_string(seed) + " (" + fmt(ratio) + "x)";
    }
  }
  const double secs = seconds_since(t0);
  const double share = feasible == 0 ? 0.0 : static_cast<double>(within) / static_cast<double>(feasible);
  return {agree == 200 && feasible > 0 && share >= 0.9 && secs <= 60.0,
          "verdicts agree " + std::to_string(agree) + "/200, latency <= 1.5x optimum on " + std::to_string(within) +
              "/" + std::to_string(feasible) + " feasible (" + fmt(100 * share) + "%, need >= 90%), " + fmt(secs) +
              " s" + (outliers.empty() ? "" : ", outliers:" + outliers)};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "aiaas-acceptance";
  std::cout << "output root: " << root.string() << std::endl;

  Run compress, adaptive, conflict;
  try {
    compress = run("compress.json", root / "compress");
    adaptive = run("adaptive_vnf.json", root / "adaptive_vnf");
    conflict = run("conflict_demo.json", root / "conflict_demo");
  } catch (const std::exception& e) {
    std::cout << "scenario run failed: " << e.what() << std::endl;
    for (int id = 1; id <= 8; ++id) {
      if (id == 3 || id == 6) continue;
      report(id, "scenario", {false, "not evaluated"});
    }
    return 1;
  }

  {
    const double f = compress.report.metric("cpu_fraction_below_threshold");
    report(1, "autoencoder fidelity",
           {f >= 0.80 && compress.seconds <= 300.0,
            "fraction |eta| < 0.10 = " + fmt(f) + " (need >= 0.80), " + fmt(compress.seconds) + " s"});
  }
  {
    const double ratio = compress.report.metric("compression_ratio");
    const double want = 75.0 / 111.0;
    const ai::Autoencoder ae = ai::Autoencoder::init(0);
    report(2, "compression ratio",
           {ratio == want && ae.compression_ratio() == want && ae.code_width() == 75 && ae.input_width() == 111,
            "ratio = " + fmt(ratio) + " (75/111 exactly, " + fmt(100 * (1 - ratio)) + "% reduction)"});
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    double dense = 0.0, rec = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      dense = std::max(dense, testgen::dense_gradient_error(seed));
      rec = std::max(rec, testgen::recurrent_gradient_error(seed));
    }
    report(3, "gradient checks",
           {dense < 1e-4 && rec < 1e-3, "dense max rel = " + fmt(dense) + " (< 1e-4), recurrent max rel = " +
                                            fmt(rec) + " (< 1e-3), 10 seeds, " + fmt(seconds_since(t0)) + " s"});
  }
  {
    const double slope = adaptive.report.metric("fit_slope_relative_error");
    const double mse = adaptive.report.metric("fit_mse");
    report(4, "linear fit",
           {slope < 0.01 && mse < 1e-5,
            "slope relative error = " + fmt(slope) + " (< 0.01), fit mse = " + fmt(mse) + " (< 1e-5)"});
  }
  {
    const double ratio = adaptive.report.metric("predictor_persistence_ratio");
    const auto horizon = harness::load_config(kConfigs / "adaptive_vnf.json").adaptive.horizon;
    report(5, "predictor utility",
           {ratio < 0.8 && horizon == 10 && adaptive.seconds <= 120.0,
            "mse / persistence mse = " + fmt(ratio) + " (< 0.8), horizon " + std::to_string(horizon) + " min, " +
                fmt(adaptive.seconds) + " s"});
  }
  report(6, "embedding oracle agreement", ac6_embedding());
  {
    const double per100 = conflict.report.metric("reversals_per_100_ticks_off");
    const double after = conflict.report.metric("reversals_after_first_decision_on");
    double invariant = 0.0;
    for (const Run* r : {&compress, &adaptive, &conflict}) invariant += r->report.metric("invariant_failures");
    report(7, "conflict stability",
           {per100 >= 10.0 && after == 0.0 && invariant == 0.0,
            "un-arbitrated reversals/100 ticks = " + fmt(per100) + " (>= 10), arbitrated reversals after first "
            "decision = " + fmt(after) + " (== 0), invariant failures over all scenarios = " + fmt(invariant)});
  }
  {
    std::size_t compared = 0;
    std::vector<std::string> differing;
    try {
      for (const auto& [config, first] : {std::pair<std::string, const Run*>{"compress.json", &compress},
                                          {"adaptive_vnf.json", &adaptive}, {"conflict_demo.json", &conflict}}) {
        const Run again = run(config, first->out.string() + "_rerun");
        const auto a = outputs(*first);
        if (a != outputs(again)) differing.push_back(config + ": manifest");
        for (const std::string& f : a) {
          ++compared;
          if (fnv1a(first->out / f) != fnv1a(again.out / f)) differing.push_back(config + ": " + f);
        }
      }
    } catch (const std::exception& e) {
      differing.push_back(std::string("rerun failed: ") + e.what());
    }
    std::string detail = std::to_string(compared) + " files hashed across reruns, " +
                         std::to_string(differing.size()) + " differ";
    for (const auto& d : differing) detail += "; " + d;
    report(8, "determinism", {differing.empty() && compared > 0, detail});
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
