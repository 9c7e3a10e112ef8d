#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aiaas/chain/catalog.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::control {

enum class ConflictKind { SameKnobOpposing, SharedResourceOversubscription };

std::string_view to_string(ConflictKind k);

/// Proposals `a` < `b`, indices into ConflictReport::proposals.
struct Conflict {
  std::size_t a = 0;
  std::size_t b = 0;
  ConflictKind kind = ConflictKind::SameKnobOpposing;

  friend bool operator==(const Conflict&, const Conflict&) = default;
  friend auto operator<=>(const Conflict&, const Conflict&) = default;
};

struct ConflictReport {
  std::vector<chain::ActionProposal> proposals;
  std::vector<Conflict> conflicts;  // sorted by (a, b, kind)
  std::int64_t window_ms = 0;
};

/// Pairs of proposals from different chains with timestamps at most
/// `window_ms` apart that
///   (a) write the same knob in opposite directions, or
///   (b) both grow reservations on the same node, where the two growths
///       together do not fit the node's residual capacity in `state`.
/// Growth is the knob value minus the current value in `state`.
ConflictReport detect_conflicts(std::vector<chain::ActionProposal> proposals, std::int64_t window_ms,
                                const sdi::TopologyState& state);

/// Knob key -> chain that won the last same-knob arbitration. Only the
/// owner may write a leased knob.
struct KnobLeases {
  std::map<std::string, std::string> owner_of;

  friend bool operator==(const KnobLeases&, const KnobLeases&) = default;
};

struct Decision {
  chain::ActionProposal proposal;
  bool approved = false;
  std::string reason;  // "no conflict", "won ...", "lost ...", "knob leased to ..."
};

struct ArbitrationResult {
  std::vector<chain::ActionProposal> approved;  // in proposal order
  std::vector<Decision> decisions;              // one per pending proposal
  std::size_t conflict_sets = 0;
};

/// Resolves conflicts among the pending proposals, those at index
/// >= `first_pending`; earlier proposals are history that still takes part
/// in conflict sets but is not decided again.
///
/// Pending proposals writing a knob leased to another chain are rejected
/// first. The remaining conflicts are merged into connected sets; in each,
/// the chain with the lowest priority value wins, ties by smaller chain id
/// (logged as a tie-break), and every pending proposal of another chain is
/// rejected. Winners of same-knob conflicts take the lease on those knobs.
/// Throws ValidationError when a conflicting chain has no priority.
ArbitrationResult arbitrate(const ConflictReport& report, const std::map<std::string, int>& priorities,
                            std::size_t first_pending = 0, KnobLeases* leases = nullptr);

}  // namespace aiaas::control
