#pragma once

// JSON mapping of chains and catalogs, shared with scenario configs that
// embed them inline.

#include "aiaas/chain/catalog.hpp"
#include "aiaas/chain/chain.hpp"
#include "common/json_util.hpp"

namespace aiaas::chain::detail {

MklChain chain_from_json(const aiaas::detail::Json& j);
aiaas::detail::Json chain_to_json(const MklChain& chain);
Catalog catalog_from_json(const aiaas::detail::Json& j);
aiaas::detail::Json catalog_to_json(const Catalog& catalog);

}  // namespace aiaas::chain::detail
