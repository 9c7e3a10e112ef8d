#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aiaas/sdi/resources.hpp"
#include "aiaas/sdi/topology.hpp"

namespace aiaas::sdi {

/// A reservation held by one owner. Node allocations use cpu/mem/storage and
/// optionally bandwidth against the node's aggregate link capacity; link
/// allocations carry only bandwidth.
struct Allocation {
  std::string id;
  std::string node;                 // empty for link allocations
  std::optional<std::size_t> link;  // set for link allocations
  ResourceVector resources;
  std::string owner;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Mutable reservation state over an immutable Topology.
///
/// Copying is the clone operation: the topology is shared read-only, all
/// reservation tables are copied, and the copies never alias.
class TopologyState {
 public:
  explicit TopologyState(std::shared_ptr<const Topology> topology);
  explicit TopologyState(Topology topology)
      : TopologyState(std::make_shared<const Topology>(std::move(topology))) {}

  const Topology& topology() const { return *topology_; }
  std::shared_ptr<const Topology> shared_topology() const { return topology_; }

  /// Throws NotFoundError (unknown node) or CapacityError naming the first
  /// component that does not fit.
  const Allocation& allocate(std::string_view node_id, const ResourceVector& resources,
                             std::string_view owner);
  const Allocation& allocate_link(std::size_t link_index, std::int64_t bandwidth,
                                  std::string_view owner);
  /// Throws NotFoundError for unknown or already released ids.
  void release(std::string_view allocation_id);
  /// Releases every allocation held by `owner`; returns how many.
  std::size_t release_owner(std::string_view owner);
  /// Replaces the resources of an allocation in place. All-or-nothing.
  void resize(std::string_view allocation_id, const ResourceVector& resources);

  const Allocation& allocation(std::string_view allocation_id) const;
  const Allocation* find_allocation(std::string_view allocation_id) const;
  const std::map<std::string, Allocation, std::less<>>& allocations() const { return allocations_; }
  std::vector<const Allocation*> allocations_of(std::string_view owner) const;

  ResourceVector allocated(std::size_t node_index) const { return node_used_[node_index]; }
  ResourceVector allocated(std::string_view node_id) const;
  ResourceVector residual(std::size_t node_index) const;
  ResourceVector residual(std::string_view node_id) const;
  std::int64_t link_allocated(std::size_t link_index) const { return link_used_[link_index]; }
  std::int64_t residual_bandwidth(std::size_t link_index) const;

  /// Route metrics with min_bandwidth taken over residual link bandwidth.
  PathMetrics residual_path(std::string_view src, std::string_view dst) const;

  /// Every violated capacity invariant, empty when the state is sound.
  std::vector<std::string> invariant_violations() const;

  /// Deep copy (same as the copy constructor, spelled out for call sites).
  TopologyState clone() const { return *this; }

  std::uint64_t next_allocation_serial() const { return next_serial_; }

  /// Structured text form: the topology spec plus an allocations section.
  std::string serialize() const;
  static TopologyState deserialize(std::string_view text);

  /// Equality over topology and reservations; the id counter is ignored.
  friend bool operator==(const TopologyState& a, const TopologyState& b);

 private:
  std::string make_id();

  std::shared_ptr<const Topology> topology_;
  std::map<std::string, Allocation, std::less<>> allocations_;
  std::vector<ResourceVector> node_used_;
  std::vector<std::int64_t> link_used_;
  std::uint64_t next_serial_ = 1;
};

}  // namespace aiaas::sdi
