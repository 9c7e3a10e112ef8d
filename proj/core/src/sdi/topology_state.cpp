#include "aiaas/sdi/topology_state.hpp"

#include <algorithm>
#include <cstdio>

#include "aiaas/common/error.hpp"

namespace aiaas::sdi {

TopologyState::TopologyState(std::shared_ptr<const Topology> topology)
    : topology_(std::move(topology)),
      node_used_(topology_->size()),
      link_used_(topology_->links().size(), 0) {}

std::string TopologyState::make_id() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "alloc-%06llu", static_cast<unsigned long long>(next_serial_++));
  return buf;
}

const Allocation& TopologyState::allocate(std::string_view node_id, const ResourceVector& resources,
                                          std::string_view owner) {
  const std::size_t idx = topology_->require_index(node_id);
  if (!resources.non_negative()) {
    throw ValidationError("allocation on '" + std::string(node_id) + "': negative request");
  }
  const ResourceVector free = residual(idx);
  if (auto bad = resources.first_exceeding(free)) {
    throw CapacityError(std::string(*bad), "insufficient " + std::string(*bad) + " on '" +
                                               std::string(node_id) + "'");
  }
  Allocation a;
  a.id = make_id();
  a.node = std::string(node_id);
  a.resources = resources;
  a.owner = std::string(owner);
  node_used_[idx] += resources;
  auto [it, _] = allocations_.emplace(a.id, std::move(a));
  return it->second;
}

const Allocation& TopologyState::allocate_link(std::size_t link_index, std::int64_t bandwidth,
                                               std::string_view owner) {
  if (link_index >= link_used_.size()) throw NotFoundError("unknown link index");
  if (bandwidth < 0) throw ValidationError("negative bandwidth request");
  if (bandwidth > residual_bandwidth(link_index)) {
    const Link& l = topology_->links()[link_index];
    throw CapacityError("bandwidth", "insufficient bandwidth on link " + l.a + "--" + l.b);
  }
  Allocation a;
  a.id = make_id();
  a.link = link_index;
  a.resources.bandwidth = bandwidth;
  a.owner = std::string(owner);
  link_used_[link_index] += bandwidth;
  auto [it, _] = allocations_.emplace(a.id, std::move(a));
  return it->second;
}

void TopologyState::release(std::string_view allocation_id) {
  auto it = allocations_.find(allocation_id);
  if (it == allocations_.end()) {
    throw NotFoundError("unknown allocation '" + std::string(allocation_id) + "'");
  }
  const Allocation& a = it->second;
  if (a.link) {
    link_used_[*a.link] -= a.resources.bandwidth;
  } else {
    node_used_[topology_->require_index(a.node)] -= a.resources;
  }
  allocations_.erase(it);
}

std::size_t TopologyState::release_owner(std::string_view owner) {
  std::vector<std::string> ids;
  for (const auto& [id, a] : allocations_) {
    if (a.owner == owner) ids.push_back(id);
  }
  for (const std::string& id : ids) release(id);
  return ids.size();
}

void TopologyState::resize(std::string_view allocation_id, const ResourceVector& resources) {
  auto it = allocations_.find(allocation_id);
  if (it == allocations_.end()) {
    throw NotFoundError("unknown allocation '" + std::string(allocation_id) + "'");
  }
  Allocation& a = it->second;
  if (!resources.non_negative()) throw ValidationError("negative resize request");
  if (a.link) {
    const std::int64_t others = link_used_[*a.link] - a.resources.bandwidth;
    if (others + resources.bandwidth > topology_->links()[*a.link].bandwidth) {
      throw CapacityError("bandwidth", "resize exceeds link bandwidth");
    }
    link_used_[*a.link] = others + resources.bandwidth;
    a.resources = ResourceVector{0, 0, 0, resources.bandwidth};
    return;
  }
  const std::size_t idx = topology_->require_index(a.node);
  const ResourceVector others = node_used_[idx] - a.resources;
  if (auto bad = (others + resources).first_exceeding(topology_->capacity(idx))) {
    throw CapacityError(std::string(*bad),
                        "resize exceeds " + std::string(*bad) + " on '" + a.node + "'");
  }
  node_used_[idx] = others + resources;
  a.resources = resources;
}

const Allocation& TopologyState::allocation(std::string_view allocation_id) const {
  const Allocation* a = find_allocation(allocation_id);
  if (!a) throw NotFoundError("unknown allocation '" + std::string(allocation_id) + "'");
  return *a;
}

const Allocation* TopologyState::find_allocation(std::string_view allocation_id) const {
  auto it = allocations_.find(allocation_id);
  return it == allocations_.end() ? nullptr : &it->second;
}

std::vector<const Allocation*> TopologyState::allocations_of(std::string_view owner) const {
  std::vector<const Allocation*> out;
  for (const auto& [id, a] : allocations_) {
    if (a.owner == owner) out.push_back(&a);
  }
  return out;
}

ResourceVector TopologyState::allocated(std::string_view node_id) const {
  return node_used_[topology_->require_index(node_id)];
}

ResourceVector TopologyState::residual(std::size_t node_index) const {
  return topology_->capacity(node_index) - node_used_[node_index];
}

ResourceVector TopologyState::residual(std::string_view node_id) const {
  return residual(topology_->require_index(node_id));
}

std::int64_t TopologyState::residual_bandwidth(std::size_t link_index) const {
  return topology_->links()[link_index].bandwidth - link_used_[link_index];
}

PathMetrics TopologyState::residual_path(std::string_view src, std::string_view dst) const {
  PathMetrics pm = path_metrics(*topology_, src, dst);
  pm.min_bandwidth = kUnboundedBandwidth;
  for (std::size_t li : pm.links) pm.min_bandwidth = std::min(pm.min_bandwidth, residual_bandwidth(li));
  return pm;
}

std::vector<std::string> TopologyState::invariant_violations() const {
  std::vector<std::string> out;
  std::vector<ResourceVector> node_sum(topology_->size());
  std::vector<std::int64_t> link_sum(link_used_.size(), 0);
  for (const auto& [id, a] : allocations_) {
    if (a.link) {
      link_sum[*a.link] += a.resources.bandwidth;
    } else {
      node_sum[topology_->require_index(a.node)] += a.resources;
    }
  }
  for (std::size_t i = 0; i < topology_->size(); ++i) {
    const std::string& id = topology_->nodes()[i].id;
    if (node_sum[i] != node_used_[i]) out.push_back("node '" + id + "': usage ledger out of sync");
    if (auto bad = node_used_[i].first_exceeding(topology_->capacity(i))) {
      out.push_back("node '" + id + "': " + std::string(*bad) + " over capacity");
    }
  }
  for (std::size_t li = 0; li < link_used_.size(); ++li) {
    const Link& l = topology_->links()[li];
    if (link_sum[li] != link_used_[li]) out.push_back("link " + l.a + "--" + l.b + ": ledger out of sync");
    if (link_used_[li] > l.bandwidth) out.push_back("link " + l.a + "--" + l.b + ": over capacity");
  }
  return out;
}

bool operator==(const TopologyState& a, const TopologyState& b) {
  return *a.topology_ == *b.topology_ && a.allocations_ == b.allocations_ &&
         a.node_used_ == b.node_used_ && a.link_used_ == b.link_used_;
}

}  // namespace aiaas::sdi
