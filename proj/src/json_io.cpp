#include "ehcr/json_io.hpp"

#include "ehcr/errors.hpp"

namespace ehcr {

using nlohmann::json;

nlohmann::json to_json(const SystemParams& p) {
  return json{{"slot_duration_s", p.slot_duration_s},
              {"sensing_duration_s", p.sensing_duration_s},
              {"bandwidth_hz", p.bandwidth_hz},
              {"noise_psd_w_per_hz", p.noise_psd_w_per_hz},
              {"packet_bits", p.packet_bits},
              {"primary_power_w", p.primary_power_w},
              {"primary_arrival_rate", p.primary_arrival_rate},
              {"energy_arrival_rate", p.energy_arrival_rate},
              {"energy_per_packet_j", p.energy_per_packet_j},
              {"energy_capacity", p.energy_capacity},
              {"gain_ppd", p.gain_ppd},
              {"gain_ssd", p.gain_ssd},
              {"eq7_mode", to_string(p.eq7)}};
}

SystemParams system_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("json: system parameters must be an object");
  SystemParams p;
  auto opt_num = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ValidationError(std::string("json: '") + key + "' must be a number");
    field = j.at(key).get<double>();
  };
  opt_num("slot_duration_s", p.slot_duration_s);
  opt_num("sensing_duration_s", p.sensing_duration_s);
  opt_num("bandwidth_hz", p.bandwidth_hz);
  opt_num("noise_psd_w_per_hz", p.noise_psd_w_per_hz);
  opt_num("packet_bits", p.packet_bits);
  opt_num("primary_power_w", p.primary_power_w);
  opt_num("primary_arrival_rate", p.primary_arrival_rate);
  opt_num("energy_arrival_rate", p.energy_arrival_rate);
  opt_num("energy_per_packet_j", p.energy_per_packet_j);
  opt_num("gain_ppd", p.gain_ppd);
  opt_num("gain_ssd", p.gain_ssd);
  if (j.contains("energy_capacity")) {
    if (!j.at("energy_capacity").is_number_integer())
      throw ValidationError("json: 'energy_capacity' must be an integer");
    p.energy_capacity = j.at("energy_capacity").get<int>();
  }
  if (j.contains("eq7_mode")) {
    if (!j.at("eq7_mode").is_string())
      throw ValidationError("json: 'eq7_mode' must be a string");
    p.eq7 = eq7_mode_from_string(j.at("eq7_mode").get<std::string>());
  }
  p.validate();
  return p;
}

nlohmann::json to_json(const AccessPolicy& policy) {
  json rows = json::array();
  for (int i = 0; i < policy.omega.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < policy.omega.cols(); ++j) row.push_back(policy.omega(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"omega", std::move(rows)}};
}

AccessPolicy access_policy_from_json(const nlohmann::json& j) {
  const json& rows = j.is_object() && j.contains("omega") ? j.at("omega") : j;
  if (!rows.is_array() || rows.empty())
    throw ValidationError("json: policy must be a nonempty array of rows");
  const int n = static_cast<int>(rows.size());
  AccessPolicy policy{Matrix(n, n)};
  for (int i = 0; i < n; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ValidationError("json: policy rows must all have length " + std::to_string(n));
    for (int k = 0; k < n; ++k) {
      if (!row.at(k).is_number()) throw ValidationError("json: policy entries must be numbers");
      policy.omega(i, k) = row.at(k).get<double>();
    }
  }
  policy.validate();
  return policy;
}

nlohmann::json to_json(const ThroughputReport& report) {
  validate_report(report);
  return json{{"lambda_p", report.lambda_p},
              {"lambda_e", report.lambda_e},
              {"e_joules", report.e_joules},
              {"e_max", report.e_max},
              {"mu_p", report.mu_p},
              {"pi_p", report.pi_p},
              {"pu_stable", report.pu_stable},
              {"mu_e", report.mu_e},
              {"mu_s", report.mu_s},
              {"per_state_contrib", report.per_state_contrib},
              {"policy_id", report.policy_id},
              {"eq7_mode", to_string(report.eq7)}};
}

nlohmann::json to_json(const OptimizationResult& result) {
  json j{{"method", to_string(result.method)},
         {"mu_s", result.mu_s},
         {"policy", to_json(result.policy).at("omega")},
         {"evaluations", result.evaluations},
         {"iterations", result.iterations},
         {"stalled", result.stalled}};
  if (result.deterministic_best)
    j["deterministic_best"] = *result.deterministic_best;
  else
    j["deterministic_best"] = nullptr;
  return j;
}

nlohmann::json to_json(const SimConfig& config) {
  return json{{"slots", config.slots},
              {"warmup_slots", config.warmup_slots},
              {"replications", config.replications},
              {"seed", config.seed},
              {"primary_model", to_string(config.primary_model)},
              {"service_mode", to_string(config.service_mode)},
              {"threads", config.threads}};
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("json: sim config must be an object");
  SimConfig c;
  auto opt_int = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer())
      throw ValidationError(std::string("json: '") + key + "' must be an integer");
    field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  opt_int("slots", c.slots);
  opt_int("warmup_slots", c.warmup_slots);
  opt_int("replications", c.replications);
  opt_int("threads", c.threads);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ValidationError("json: 'seed' must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("primary_model"))
    c.primary_model = primary_model_from_string(j.at("primary_model").get<std::string>());
  if (j.contains("service_mode"))
    c.service_mode = pu_service_mode_from_string(j.at("service_mode").get<std::string>());
  c.validate();
  return c;
}

nlohmann::json to_json(const SimStats& stats) {
  return json{{"est_mu_p", stats.est_mu_p},
              {"est_pi_p", stats.est_pi_p},
              {"est_mu_e", stats.est_mu_e},
              {"est_mu_s", stats.est_mu_s},
              {"hw99_mu_p", stats.hw99_mu_p},
              {"hw99_pi_p", stats.hw99_pi_p},
              {"hw99_mu_e", stats.hw99_mu_e},
              {"hw99_mu_s", stats.hw99_mu_s},
              {"state_histogram", stats.state_histogram},
              {"state_histogram_se", stats.state_histogram_se},
              {"slots_per_rep", stats.slots_per_rep},
              {"warmup_slots", stats.warmup_slots},
              {"replications", stats.replications},
              {"seed", stats.seed},
              {"primary_model", to_string(stats.primary_model)},
              {"service_mode", to_string(stats.service_mode)}};
}

}  // namespace ehcr
