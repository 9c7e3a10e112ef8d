#include "aiaas/chain/knobs.hpp"

#include "aiaas/common/error.hpp"

namespace aiaas::chain {

const std::vector<KnobDef>& knob_definitions() {
  static const std::vector<KnobDef> defs{
      {"vnf.cpu.millicores", ResourceComponent::Cpu},
      {"vnf.mem.mib", ResourceComponent::Mem},
      {"vnf.storage.mib", ResourceComponent::Storage},
      {"vnf.bandwidth.mbps", ResourceComponent::Bandwidth},
  };
  return defs;
}

const KnobDef& require_knob(std::string_view name) {
  for (const KnobDef& k : knob_definitions()) {
    if (k.name == name) return k;
  }
  throw NotFoundError("unknown knob '" + std::string(name) + "'");
}

std::int64_t component_of(const sdi::ResourceVector& r, ResourceComponent c) {
  switch (c) {
    case ResourceComponent::Cpu: return r.cpu;
    case ResourceComponent::Mem: return r.mem;
    case ResourceComponent::Storage: return r.storage;
    case ResourceComponent::Bandwidth: return r.bandwidth;
  }
  return 0;
}

void set_component(sdi::ResourceVector& r, ResourceComponent c, std::int64_t value) {
  switch (c) {
    case ResourceComponent::Cpu: r.cpu = value; break;
    case ResourceComponent::Mem: r.mem = value; break;
    case ResourceComponent::Storage: r.storage = value; break;
    case ResourceComponent::Bandwidth: r.bandwidth = value; break;
  }
}

namespace {

const sdi::Allocation& node_allocation(const sdi::TopologyState& state, std::string_view allocation_id) {
  const sdi::Allocation& a = state.allocation(allocation_id);
  if (a.link) throw ValidationError("allocation '" + a.id + "' is a link reservation and has no knobs");
  return a;
}

}  // namespace

std::int64_t read_knob(const sdi::TopologyState& state, std::string_view allocation_id, std::string_view knob) {
  return component_of(node_allocation(state, allocation_id).resources, require_knob(knob).component);
}

sdi::ResourceVector knob_resources(const sdi::TopologyState& state, std::string_view allocation_id,
                                   std::string_view knob, std::int64_t value) {
  sdi::ResourceVector r = node_allocation(state, allocation_id).resources;
  set_component(r, require_knob(knob).component, value);
  return r;
}

void write_knob(sdi::TopologyState& state, std::string_view allocation_id, std::string_view knob,
                std::int64_t value) {
  state.resize(allocation_id, knob_resources(state, allocation_id, knob, value));
}

}  // namespace aiaas::chain
