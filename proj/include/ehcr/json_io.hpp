#pragma once

#include "json.hpp"

#include "ehcr/access_policy.hpp"
#include "ehcr/optimizer.hpp"
#include "ehcr/simulator.hpp"
#include "ehcr/system_params.hpp"
#include "ehcr/throughput.hpp"

namespace ehcr {

// Typed JSON conversions. The *_from_json readers are strict: wrong types or
// out-of-range values throw ValidationError (unknown keys are rejected by the
// experiment-config layer, which reports all problems at once).

nlohmann::json to_json(const SystemParams& params);
SystemParams system_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AccessPolicy& policy);
AccessPolicy access_policy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ThroughputReport& report);

nlohmann::json to_json(const OptimizationResult& result);

nlohmann::json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimStats& stats);

}  // namespace ehcr
