#pragma once

// JSON mapping of the training config, shared by model files and scenario
// configs.

#include "aiaas/ai/optimizer.hpp"
#include "common/json_util.hpp"

namespace aiaas::ai::detail {

aiaas::detail::Json train_config_to_json(const TrainConfig& c);
/// Missing fields keep the values already in `base`.
TrainConfig train_config_from_json(const aiaas::detail::Json& j, TrainConfig base = {});

}  // namespace aiaas::ai::detail
