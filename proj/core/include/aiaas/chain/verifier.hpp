#pragma once

#include <string>
#include <vector>

#include "aiaas/chain/chain.hpp"
#include "aiaas/chain/embedding.hpp"
#include "aiaas/sdi/topology_state.hpp"

namespace aiaas::chain {

struct VerifyResult {
  bool ok = false;
  std::string constraint;  // first violated constraint, empty when ok
  std::string message;
  double total_latency_ms = 0.0;
};

/// Checks a full assignment (indexed like chain.steps) against every rule
/// listed in embedding.hpp, using the residuals of `state` before any of the
/// chain's reservations. Written separately from the embedder so that each
/// can check the other.
VerifyResult verify_assignment(const MklChain& chain, const sdi::TopologyState& state,
                               const std::vector<std::string>& step_nodes);

/// verify_assignment plus a consistency check of the recorded connections
/// and total latency.
VerifyResult verify_embedding(const MklChain& chain, const sdi::TopologyState& state_before,
                              const Embedding& embedding);

}  // namespace aiaas::chain
