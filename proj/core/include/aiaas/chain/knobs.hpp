#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::chain {

enum class ResourceComponent { Cpu, Mem, Storage, Bandwidth };

/// A writable parameter backed by one component of a node allocation.
struct KnobDef {
  std::string name;
  ResourceComponent component;
};

/// vnf.cpu.millicores, vnf.mem.mib, vnf.storage.mib, vnf.bandwidth.mbps.
const std::vector<KnobDef>& knob_definitions();

/// Throws NotFoundError for unknown knob names.
const KnobDef& require_knob(std::string_view name);

std::int64_t component_of(const sdi::ResourceVector& r, ResourceComponent c);
void set_component(sdi::ResourceVector& r, ResourceComponent c, std::int64_t value);

/// Current knob value on a node allocation. Throws NotFoundError for an
/// unknown allocation or knob, ValidationError for link allocations.
std::int64_t read_knob(const sdi::TopologyState& state, std::string_view allocation_id, std::string_view knob);

/// Resources the allocation would hold after setting the knob to `value`.
sdi::ResourceVector knob_resources(const sdi::TopologyState& state, std::string_view allocation_id,
                                   std::string_view knob, std::int64_t value);

/// Sets the knob through TopologyState::resize; CapacityError leaves the
/// state unchanged.
void write_knob(sdi::TopologyState& state, std::string_view allocation_id, std::string_view knob,
                std::int64_t value);

}  // namespace aiaas::chain
