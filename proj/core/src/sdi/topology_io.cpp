#include "aiaas/sdi/topology_io.hpp"

#include "aiaas/common/error.hpp"
#include "common/json_util.hpp"

namespace aiaas::sdi {

using detail::Json;

namespace {

Json spec_to_json(const TopologySpec& spec) {
  Json j;
  j["regions"] = spec.regions;
  Json nodes = Json::array();
  for (const ComputeNode& n : spec.nodes) {
    nodes.push_back({{"id", n.id},
                     {"region", n.region},
                     {"tier", std::string(to_string(n.tier))},
                     {"cpu", n.cpu_capacity},
                     {"mem", n.mem_capacity},
                     {"storage", n.storage_capacity},
                     {"reliability", n.reliability}});
  }
  j["nodes"] = std::move(nodes);
  Json switches = Json::array();
  for (const SwitchDecl& s : spec.switches) {
    switches.push_back({{"id", s.id}, {"region", s.region}, {"tier", std::string(to_string(s.tier))}});
  }
  j["switches"] = std::move(switches);
  Json links = Json::array();
  for (const Link& l : spec.links) {
    links.push_back({{"a", l.a},
                     {"b", l.b},
                     {"bandwidth", l.bandwidth},
                     {"latency", l.latency_ms},
                     {"reliability", l.reliability}});
  }
  j["links"] = std::move(links);
  return j;
}

TopologySpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("topology: expected an object");
  TopologySpec spec;
  spec.regions = detail::get_or<std::vector<std::string>>(j, "regions", {});
  for (const Json& n : detail::get_or<Json>(j, "nodes", Json::array())) {
    ComputeNode node;
    node.id = detail::get_required<std::string>(n, "id", "node");
    node.region = detail::get_or<std::string>(n, "region", "");
    node.tier = parse_tier(detail::get_or<std::string>(n, "tier", "edge"));
    node.cpu_capacity = detail::get_or<std::int64_t>(n, "cpu", 0);
    node.mem_capacity = detail::get_or<std::int64_t>(n, "mem", 0);
    node.storage_capacity = detail::get_or<std::int64_t>(n, "storage", 0);
    node.reliability = detail::get_or<double>(n, "reliability", 1.0);
    spec.nodes.push_back(std::move(node));
  }
  for (const Json& s : detail::get_or<Json>(j, "switches", Json::array())) {
    SwitchDecl sw;
    if (s.is_string()) {
      sw.id = s.get<std::string>();
    } else {
      sw.id = detail::get_required<std::string>(s, "id", "switch");
      sw.region = detail::get_or<std::string>(s, "region", "");
      sw.tier = parse_tier(detail::get_or<std::string>(s, "tier", "core"));
    }
    spec.switches.push_back(std::move(sw));
  }
  for (const Json& l : detail::get_or<Json>(j, "links", Json::array())) {
    Link link;
    link.a = detail::get_required<std::string>(l, "a", "link");
    link.b = detail::get_required<std::string>(l, "b", "link");
    link.bandwidth = detail::get_required<std::int64_t>(l, "bandwidth", "link");
    link.latency_ms = detail::get_required<double>(l, "latency", "link");
    link.reliability = detail::get_or<double>(l, "reliability", 1.0);
    spec.links.push_back(std::move(link));
  }
  return spec;
}

Topology topology_from_json(const Json& j) {
  if (j.is_object() && j.contains("preset")) {
    return Topology::preset(detail::get_required<std::string>(j, "preset", "topology"));
  }
  return Topology::build(spec_from_json(j));
}

}  // namespace

TopologySpec parse_topology_spec(std::string_view text) {
  return spec_from_json(detail::parse_json_text(text, "topology"));
}

std::string render_topology_spec(const TopologySpec& spec) {
  return detail::dump_canonical(spec_to_json(spec));
}

Topology load_topology(const std::filesystem::path& path) {
  return topology_from_json(detail::read_json_file(path));
}

Topology resolve_topology(std::string_view preset_or_path) {
  if (std::filesystem::exists(std::filesystem::path(preset_or_path))) {
    return load_topology(std::filesystem::path(preset_or_path));
  }
  return Topology::preset(preset_or_path);
}

std::string TopologyState::serialize() const {
  Json j = spec_to_json(topology_->spec());
  Json allocs = Json::array();
  for (const auto& [id, a] : allocations_) {
    Json e{{"id", a.id}, {"owner", a.owner}, {"bandwidth", a.resources.bandwidth}};
    if (a.link) {
      e["link"] = *a.link;
    } else {
      e["node"] = a.node;
      e["cpu"] = a.resources.cpu;
      e["mem"] = a.resources.mem;
      e["storage"] = a.resources.storage;
    }
    allocs.push_back(std::move(e));
  }
  j["allocations"] = std::move(allocs);
  j["next_allocation_serial"] = next_serial_;
  return detail::dump_canonical(j);
}

TopologyState TopologyState::deserialize(std::string_view text) {
  const Json j = detail::parse_json_text(text, "topology state");
  TopologyState state(Topology::build(spec_from_json(j)));
  for (const Json& e : detail::get_or<Json>(j, "allocations", Json::array())) {
    Allocation a;
    a.id = detail::get_required<std::string>(e, "id", "allocation");
    a.owner = detail::get_or<std::string>(e, "owner", "");
    a.resources.bandwidth = detail::get_or<std::int64_t>(e, "bandwidth", 0);
    if (e.contains("link")) {
      a.link = detail::get_required<std::size_t>(e, "link", "allocation");
      if (*a.link >= state.link_used_.size()) throw ValidationError("allocation '" + a.id + "': bad link");
      state.link_used_[*a.link] += a.resources.bandwidth;
    } else {
      a.node = detail::get_required<std::string>(e, "node", "allocation");
      a.resources.cpu = detail::get_or<std::int64_t>(e, "cpu", 0);
      a.resources.mem = detail::get_or<std::int64_t>(e, "mem", 0);
      a.resources.storage = detail::get_or<std::int64_t>(e, "storage", 0);
      state.node_used_[state.topology_->require_index(a.node)] += a.resources;
    }
    if (!state.allocations_.emplace(a.id, a).second) {
      throw ValidationError("duplicate allocation id '" + a.id + "'");
    }
  }
  state.next_serial_ = detail::get_or<std::uint64_t>(j, "next_allocation_serial", state.allocations_.size() + 1);
  if (auto bad = state.invariant_violations(); !bad.empty()) {
    throw ValidationError("topology state: " + bad.front());
  }
  return state;
}

void save_topology_state(const TopologyState& state, const std::filesystem::path& path) {
  detail::write_text_file(path, state.serialize());
}

TopologyState load_topology_state(const std::filesystem::path& path) {
  return TopologyState::deserialize(detail::read_text_file(path));
}

}  // namespace aiaas::sdi
