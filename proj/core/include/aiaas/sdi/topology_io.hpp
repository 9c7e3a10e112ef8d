#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aiaas/sdi/topology.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::sdi {

// Topology documents are JSON:
//
//   {
//     "regions":  ["core", "toronto"],
//     "nodes":    [{"id": "vm1", "region": "core", "tier": "core",
//                   "cpu": 4000, "mem": 8192, "storage": 40960,
//                   "reliability": 0.999}],
//     "switches": [{"id": "sw1", "region": "core", "tier": "core"}],
//     "links":    [{"a": "vm1", "b": "sw1", "bandwidth": 1000,
//                   "latency": 0.5, "reliability": 0.9999}]
//   }
//
// Units: cpu in millicores, mem/storage in MiB, bandwidth in Mb/s, latency in
// ms. A topology *state* document has the same fields plus
//
//     "allocations": [{"id": "alloc-000001", "node": "vm1", "cpu": 500,
//                      "mem": 0, "storage": 0, "bandwidth": 0,
//                      "owner": "mkl-1"},
//                     {"id": "alloc-000002", "link": 3, "bandwidth": 10,
//                      "owner": "mkl-1"}],
//     "next_allocation_serial": 3
//
// The "preset" key may replace the node/link/switch lists to name a
// built-in topology.

TopologySpec parse_topology_spec(std::string_view text);
std::string render_topology_spec(const TopologySpec& spec);

/// Reads either an explicit spec or {"preset": name}.
Topology load_topology(const std::filesystem::path& path);
/// Accepts a preset name or a file path.
Topology resolve_topology(std::string_view preset_or_path);

void save_topology_state(const TopologyState& state, const std::filesystem::path& path);
TopologyState load_topology_state(const std::filesystem::path& path);

}  // namespace aiaas::sdi
