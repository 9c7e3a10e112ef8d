#include "aiaas/harness/config.hpp"

#include "ai/model_json.hpp"
#include "aiaas/chain/validate.hpp"
#include "aiaas/common/error.hpp"
#include "aiaas/sdi/topology.hpp"
#include "chain/chain_json.hpp"
#include "common/json_util.hpp"

namespace aiaas::harness {

using aiaas::detail::get_or;
using aiaas::detail::get_required;
using aiaas::detail::Json;
namespace fs = std::filesystem;

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::Compress: return "compress";
    case Scenario::AdaptiveVnf: return "adaptive-vnf";
    case Scenario::ConflictDemo: return "conflict-demo";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text) {
  if (text == "compress") return Scenario::Compress;
  if (text == "adaptive-vnf") return Scenario::AdaptiveVnf;
  if (text == "conflict-demo") return Scenario::ConflictDemo;
  throw ValidationError("unknown scenario '" + std::string(text) + "' (compress, adaptive-vnf, conflict-demo)");
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  if (!fs::exists(path)) throw ValidationError("referenced file does not exist: " + path.string());
  return path;
}

metrics::WorkloadProfile workload_from_json(const Json& j, std::uint64_t seed, double default_hours) {
  if (!j.is_object()) throw ValidationError("workload must be an object");
  const auto wseed = get_or<std::uint64_t>(j, "seed", seed);
  if (j.contains("profile")) {
    const auto name = get_required<std::string>(j, "profile", "workload");
    if (name == "paper30min") return metrics::WorkloadProfile::paper30min(wseed);
    if (name == "periodic") {
      return metrics::WorkloadProfile::periodic_with_bursts(get_or<double>(j, "hours", default_hours), wseed);
    }
    throw ValidationError("unknown workload profile '" + name + "' (paper30min, periodic)");
  }
  metrics::WorkloadProfile p;
  p.name = get_or<std::string>(j, "name", p.name);
  p.duration = get_required<double>(j, "duration", "workload");
  p.interval = get_or<double>(j, "interval", p.interval);
  p.base_rate = get_or<double>(j, "base_rate", p.base_rate);
  p.noise = get_or<double>(j, "noise", p.noise);
  p.seed = wseed;
  for (const Json& s : get_or<Json>(j, "segments", Json::array())) {
    metrics::WorkloadSegment seg;
    seg.start = get_required<double>(s, "start", "workload.segments");
    seg.end = get_required<double>(s, "end", "workload.segments");
    seg.shape = metrics::parse_segment_shape(get_required<std::string>(s, "shape", "workload.segments"));
    seg.amplitude = get_required<double>(s, "amplitude", "workload.segments");
    if (s.contains("from") && !s["from"].is_null()) seg.from = s["from"].get<double>();
    p.segments.push_back(seg);
  }
  return p;
}

void read_compress(const Json& j, CompressParams& c) {
  c.training_ratio = get_or(j, "training_ratio", c.training_ratio);
  c.eta_threshold = get_or(j, "eta_threshold", c.eta_threshold);
}

void read_adaptive(const Json& j, AdaptiveParams& a) {
  a.hours = get_or(j, "hours", a.hours);
  a.training_ratio = get_or(j, "training_ratio", a.training_ratio);
  a.window = get_or(j, "window", a.window);
  a.horizon = get_or(j, "horizon", a.horizon);
  a.hidden_size = get_or(j, "hidden_size", a.hidden_size);
  a.planted_slope = get_or(j, "planted_slope", a.planted_slope);
  a.planted_intercept = get_or(j, "planted_intercept", a.planted_intercept);
  a.noise_sigma = get_or(j, "noise_sigma", a.noise_sigma);
  a.vnf_node = get_or(j, "vnf_node", a.vnf_node);
  a.vnf_owner = get_or(j, "vnf_owner", a.vnf_owner);
  a.vnf_capacity_millicores = get_or(j, "vnf_capacity_millicores", a.vnf_capacity_millicores);
  a.headroom = get_or(j, "headroom", a.headroom);
}

void read_conflict(const Json& j, ConflictParams& c) {
  c.ticks = get_or(j, "ticks", c.ticks);
  c.knob_node = get_or(j, "knob_node", c.knob_node);
  c.knob_owner = get_or(j, "knob_owner", c.knob_owner);
  c.initial_millicores = get_or(j, "initial_millicores", c.initial_millicores);
}

}  // namespace

void ScenarioConfig::validate() const {
  train.validate();
  if (output_dir.empty()) throw ValidationError("output_dir must be set");
  metrics::validate_profile(workload);
  catalog.validate();
  for (const chain::MklChain& c : chains) {
    const chain::ValidationReport r = chain::validate_chain(c);
    if (!r.valid()) {
      std::string msg = "chain '" + c.id + "' is invalid:";
      for (const auto& e : r.errors()) msg += " " + e + ";";
      throw ValidationError(msg);
    }
  }
  auto ratio_ok = [](double r) { return r > 0.0 && r < 1.0; };
  switch (scenario) {
    case Scenario::Compress:
      if (!ratio_ok(compress.training_ratio)) throw ValidationError("compress.training_ratio must be in (0,1)");
      if (!(compress.eta_threshold > 0.0)) throw ValidationError("compress.eta_threshold must be > 0");
      break;
    case Scenario::AdaptiveVnf:
      if (!ratio_ok(adaptive.training_ratio)) throw ValidationError("adaptive_vnf.training_ratio must be in (0,1)");
      if (adaptive.window == 0 || adaptive.horizon == 0 || adaptive.hidden_size < 1) {
        throw ValidationError("adaptive_vnf.window, horizon and hidden_size must be >= 1");
      }
      if (!(adaptive.noise_sigma >= 0.0) || !(adaptive.headroom >= 0.0)) {
        throw ValidationError("adaptive_vnf.noise_sigma and headroom must be >= 0");
      }
      if (adaptive.vnf_capacity_millicores <= 0) throw ValidationError("adaptive_vnf.vnf_capacity_millicores must be > 0");
      if (chains.size() != 1) throw ValidationError("adaptive-vnf expects exactly one chain");
      break;
    case Scenario::ConflictDemo:
      if (conflict.ticks == 0) throw ValidationError("conflict_demo.ticks must be >= 1");
      if (conflict.initial_millicores < 0) throw ValidationError("conflict_demo.initial_millicores must be >= 0");
      if (chains.empty()) throw ValidationError("conflict-demo expects at least one chain");
      break;
  }
}

ScenarioConfig parse_config(std::string_view text, const fs::path& base_dir,
                            std::optional<std::uint64_t> seed_override) {
  const Json j = aiaas::detail::parse_json_text(text, "scenario config");
  if (!j.is_object()) throw ValidationError("scenario config must be a JSON object");
  ScenarioConfig c;
  c.scenario = parse_scenario(get_required<std::string>(j, "scenario", "config"));
  if (seed_override) {
    c.seed = *seed_override;
  } else {
    if (!j.contains("seed") || j["seed"].is_null()) throw ValidationError("config.seed is mandatory");
    c.seed = get_required<std::uint64_t>(j, "seed", "config");
  }

  const auto topo = get_or<std::string>(j, "topology", "paper");
  if (topo.find('/') != std::string::npos || topo.ends_with(".json")) {
    c.topology = fs::absolute(resolve(base_dir, topo)).lexically_normal().string();
  } else {
    c.topology = topo;
    (void)sdi::Topology::preset(topo);
  }

  if (j.contains("compress")) read_compress(j["compress"], c.compress);
  if (j.contains("adaptive_vnf")) read_adaptive(j["adaptive_vnf"], c.adaptive);
  if (j.contains("conflict_demo")) read_conflict(j["conflict_demo"], c.conflict);

  const Json default_workload = c.scenario == Scenario::AdaptiveVnf ? Json{{"profile", "periodic"}}
                                                                    : Json{{"profile", "paper30min"}};
  c.workload = workload_from_json(get_or<Json>(j, "workload", default_workload), c.seed, c.adaptive.hours);

  for (const Json& entry : get_or<Json>(j, "chains", Json::array())) {
    if (entry.is_string()) {
      const fs::path p = resolve(base_dir, entry.get<std::string>());
      c.chains.push_back(chain::detail::chain_from_json(aiaas::detail::read_json_file(p)));
    } else {
      c.chains.push_back(chain::detail::chain_from_json(entry));
    }
  }
  if (j.contains("catalog")) {
    const Json& cat = j["catalog"];
    c.catalog = cat.is_string()
                    ? chain::detail::catalog_from_json(aiaas::detail::read_json_file(resolve(base_dir, cat.get<std::string>())))
                    : chain::detail::catalog_from_json(cat);
  }

  ai::TrainConfig base;
  base.seed = c.seed;
  c.train = ai::detail::train_config_from_json(get_or<Json>(j, "train", Json::object()), base);

  const auto out = get_or<std::string>(j, "output_dir", "out/" + std::string(to_string(c.scenario)));
  c.output_dir = fs::path(out).is_relative() ? base_dir / out : fs::path(out);
  c.validate();
  return c;
}

ScenarioConfig load_config(const fs::path& path, std::optional<std::uint64_t> seed_override) {
  if (!fs::exists(path)) throw ValidationError("config file does not exist: " + path.string());
  return parse_config(aiaas::detail::read_text_file(path), path.parent_path(), seed_override);
}

}  // namespace aiaas::harness
