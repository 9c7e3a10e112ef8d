// aiaas: scenario runner, config validator and embedding oracle.
//
//   aiaas run --scenario compress --config configs/compress.json --out out/c --seed 7 [--strict]
//   aiaas validate --config configs/adaptive_vnf.json
//   aiaas oracle embed --topology configs/topologies/lab.json --chain configs/chains/x.json
//
// Exit codes: 0 success, 2 invalid config, 3 training divergence,
// 4 a scenario check failed under --strict, 1 anything else.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aiaas/chain/chain_io.hpp"
#include "aiaas/chain/embedding.hpp"
#include "aiaas/chain/validate.hpp"
#include "aiaas/common/error.hpp"
#include "aiaas/harness/scenarios.hpp"
#include "aiaas/metrics/csv.hpp"
#include "aiaas/sdi/topology_io.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitThreshold = 4;

using namespace aiaas;

int cmd_run(const std::string& scenario, const std::string& config_path, const std::string& out,
            std::optional<std::uint64_t> seed, bool strict) {
  harness::ScenarioConfig config = harness::load_config(config_path, seed);
  if (!scenario.empty() && harness::parse_scenario(scenario) != config.scenario) {
    throw ValidationError("--scenario " + scenario + " does not match the config's scenario '" +
                          std::string(harness::to_string(config.scenario)) + "'");
  }
  if (!out.empty()) {
    config.output_dir = out;
  } else if (const char* env = std::getenv("AIAAS_OUT_DIR"); env != nullptr && *env != '\0') {
    config.output_dir = env;
  }
  const harness::RunReport report = harness::run_scenario(config);
  std::cout << report.render_summary() << "wall_seconds = " << report.wall_seconds << "\noutput: "
            << config.output_dir.string() << '\n';
  const auto problems = harness::verify_manifest(report, config.output_dir);
  for (const std::string& problem : problems) std::cerr << "manifest: " << problem << '\n';
  if (!problems.empty()) return kExitOther;
  if (strict && !report.all_checks_passed()) {
    std::cerr << "one or more scenario checks failed\n";
    return kExitThreshold;
  }
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  const harness::ScenarioConfig config = harness::load_config(config_path);
  std::cout << "config ok: scenario " << harness::to_string(config.scenario) << ", seed " << config.seed << ", "
            << config.chains.size() << " chain(s)\n";
  for (const chain::MklChain& c : config.chains) {
    for (const std::string& w : chain::validate_chain(c).warnings()) {
      std::cout << "  warning: chain " << c.id << ": " << w << '\n';
    }
  }
  return kExitOk;
}

nlohmann::json result_json(const chain::EmbedResult& r) {
  nlohmann::json j;
  j["status"] = std::string(chain::to_string(r.status));
  j["feasible"] = r.feasible();
  if (r.feasible()) {
    j["step_nodes"] = r.embedding.step_nodes;
    j["total_latency_ms"] = r.embedding.total_latency_ms;
  } else {
    j["constraint"] = r.constraint;
    j["step"] = r.step;
  }
  j["expansions"] = r.expansions;
  return j;
}

int cmd_oracle_embed(const std::string& topology, const std::string& chain_path, std::uint64_t limit) {
  const sdi::TopologyState state(sdi::resolve_topology(topology));
  const chain::MklChain c = chain::load_chain(chain_path);
  const chain::ValidationReport report = chain::validate_chain(c);
  if (!report.valid()) {
    std::string msg = "chain '" + c.id + "' is invalid:";
    for (const auto& e : report.errors()) msg += " " + e + ";";
    throw ValidationError(msg);
  }
  sdi::TopologyState scratch = state.clone();
  chain::EmbedOptions options;
  options.reserve = false;
  nlohmann::json j;
  j["chain"] = c.id;
  j["bruteforce"] = result_json(chain::embed_bruteforce(c, state, limit));
  j["greedy"] = result_json(chain::embed(c, scratch, options));
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aiaas: AI-as-a-service control loops over a software-defined infrastructure"};
  app.require_subcommand(1);

  std::string scenario;
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
  run->add_option("--scenario", scenario, "compress, adaptive-vnf or conflict-demo (must match the config)");
  run->add_option("--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides AIAAS_OUT_DIR and the config)");
  run->add_option("--seed", seed, "Seed (overrides the config)");
  run->add_flag("--strict", strict, "Exit 4 when a scenario check fails");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate a scenario config and its chains");
  validate->add_option("--config", validate_path, "Scenario config file")->required()->check(CLI::ExistingFile);

  std::string topology;
  std::string chain_path;
  std::uint64_t limit = 1000000;
  auto* oracle = app.add_subcommand("oracle", "Reference implementations for cross-checks");
  oracle->require_subcommand(1);
  auto* embed = oracle->add_subcommand("embed", "Brute-force embedding next to the greedy verdict");
  embed->add_option("--topology", topology, "Topology file or preset name")->required();
  embed->add_option("--chain", chain_path, "Chain file")->required()->check(CLI::ExistingFile);
  embed->add_option("--limit", limit, "Maximum assignments to enumerate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (*run) return cmd_run(scenario, config_path, out, seed, strict);
    if (*validate) return cmd_validate(validate_path);
    if (*embed) return cmd_oracle_embed(topology, chain_path, limit);
  } catch (const DivergenceError& e) {
    std::cerr << "training diverged: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const ValidationError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const ParseError& e) {
    std::cerr << "invalid config (line " << e.line() << "): " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const NotFoundError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
