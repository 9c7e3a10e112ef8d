#pragma once

// Scenario configs are JSON. Relative paths resolve against the config
// file's directory.
//
//   {
//     "scenario": "compress" | "adaptive-vnf" | "conflict-demo",
//     "seed": 7,                          // mandatory
//     "topology": "paper",                // preset name or topology file
//     "output_dir": "out/compress",
//     "workload": {"profile": "paper30min"} | {"profile": "periodic", "hours": 48}
//                 | {"name", "duration", "interval", "base_rate", "noise",
//                    "segments": [{"start", "end", "shape", "amplitude", "from"}]},
//     "chains": ["chains/a.json", {...inline chain...}],
//     "catalog": "catalogs/x.json" | {...inline catalog...},
//     "train": {"learning_rate", "epochs", "batch_size", "optimizer", ...},
//     "compress":      {"training_ratio": 0.8, "eta_threshold": 0.1},
//     "adaptive_vnf":  {...AdaptiveParams fields...},
//     "conflict_demo": {...ConflictParams fields...}
//   }
//
// The workload and train seeds are derived from "seed" unless given.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aiaas/ai/optimizer.hpp"
#include "aiaas/chain/catalog.hpp"
#include "aiaas/chain/chain.hpp"
#include "aiaas/metrics/workload.hpp"

namespace aiaas::harness {

enum class Scenario { Compress, AdaptiveVnf, ConflictDemo };

std::string_view to_string(Scenario s);
/// Throws ValidationError for an unknown name.
Scenario parse_scenario(std::string_view text);

struct CompressParams {
  double training_ratio = 0.8;
  double eta_threshold = 0.1;
};

struct AdaptiveParams {
  double hours = 48.0;
  double training_ratio = 0.8;
  std::size_t window = 30;   // samples
  std::size_t horizon = 10;  // samples, one per simulated minute
  int hidden_size = 16;
  double planted_slope = 0.7;
  double planted_intercept = 0.1;
  double noise_sigma = 1e-3;
  std::string vnf_node = "waterloo-vm4";
  std::string vnf_owner = "vnf-firewall";
  std::int64_t vnf_capacity_millicores = 3000;  // cpu_norm 1.0 in millicores
  double headroom = 0.05;
};

struct ConflictParams {
  std::size_t ticks = 100;
  std::string knob_node = "waterloo-vm4";
  std::string knob_owner = "demo-vnf";
  std::int64_t initial_millicores = 2000;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::Compress;
  std::uint64_t seed = 0;
  std::string topology = "paper";  // preset name or absolute path
  metrics::WorkloadProfile workload;
  std::vector<chain::MklChain> chains;
  chain::Catalog catalog;
  ai::TrainConfig train;
  std::filesystem::path output_dir;
  CompressParams compress;
  AdaptiveParams adaptive;
  ConflictParams conflict;

  /// Throws ValidationError when a field is out of range or a chain fails
  /// validation.
  void validate() const;
};

/// Throws ParseError on malformed JSON and ValidationError for schema
/// violations, a missing seed or a referenced file that does not exist.
/// `seed_override` replaces the file's seed before any seed is derived.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            std::optional<std::uint64_t> seed_override = std::nullopt);
ScenarioConfig load_config(const std::filesystem::path& path,
                           std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace aiaas::harness
