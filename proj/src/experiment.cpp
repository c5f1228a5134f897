#include "ehcr/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ehcr/errors.hpp"
#include "ehcr/json_io.hpp"
#include "ehcr/optimizer.hpp"
#include "ehcr/rng.hpp"

namespace ehcr {

using nlohmann::json;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::analytic: return "analytic";
    case RunMode::simulate: return "simulate";
    case RunMode::both: return "both";
  }
  return "unknown";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "analytic") return RunMode::analytic;
  if (s == "simulate") return RunMode::simulate;
  if (s == "both") return RunMode::both;
  throw ValidationError("unknown mode '" + s + "' (expected analytic|simulate|both)");
}

std::string to_string(const OptimizerChoice& choice) {
  switch (choice.source) {
    case PolicySource::enumeration: return "enum";
    case PolicySource::value_iteration: return "vi";
    case PolicySource::ascent: return "ascent";
    case PolicySource::fixed: return "fixed:" + std::to_string(choice.fixed_g);
  }
  return "unknown";
}

OptimizerChoice optimizer_choice_from_string(const std::string& s) {
  if (s == "enum") return {PolicySource::enumeration, 1};
  if (s == "vi") return {PolicySource::value_iteration, 1};
  if (s == "ascent") return {PolicySource::ascent, 1};
  if (s.rfind("fixed:", 0) == 0) {
    const std::string arg = s.substr(6);
    std::size_t used = 0;
    int g = 0;
    try {
      g = std::stoi(arg, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != arg.size() || g < 1)
      throw ValidationError("optimizer 'fixed:G' needs a positive integer G, got '" + s + "'");
    return {PolicySource::fixed, g};
  }
  throw ValidationError("unknown optimizer '" + s + "' (expected enum|vi|ascent|fixed:G)");
}

const std::vector<std::string>& sweepable_fields() {
  static const std::vector<std::string> fields = {
      "slot_duration_s",      "sensing_duration_s",  "bandwidth_hz",
      "noise_psd_w_per_hz",   "packet_bits",         "primary_power_w",
      "primary_arrival_rate", "energy_arrival_rate", "energy_per_packet_j",
      "energy_capacity",      "gain_ppd",            "gain_ssd"};
  return fields;
}

void apply_field(SystemParams& params, const std::string& field, double value) {
  if (field == "slot_duration_s") params.slot_duration_s = value;
  else if (field == "sensing_duration_s") params.sensing_duration_s = value;
  else if (field == "bandwidth_hz") params.bandwidth_hz = value;
  else if (field == "noise_psd_w_per_hz") params.noise_psd_w_per_hz = value;
  else if (field == "packet_bits") params.packet_bits = value;
  else if (field == "primary_power_w") params.primary_power_w = value;
  else if (field == "primary_arrival_rate") params.primary_arrival_rate = value;
  else if (field == "energy_arrival_rate") params.energy_arrival_rate = value;
  else if (field == "energy_per_packet_j") params.energy_per_packet_j = value;
  else if (field == "gain_ppd") params.gain_ppd = value;
  else if (field == "gain_ssd") params.gain_ssd = value;
  else if (field == "energy_capacity") {
    if (value != std::floor(value) || value < 0)
      throw ValidationError("sweep: energy_capacity values must be nonnegative integers");
    params.energy_capacity = static_cast<int>(value);
  } else {
    throw ValidationError("sweep: unknown field '" + field + "'");
  }
}

namespace {

constexpr long kGridGuard = 100000;

void check_keys(const json& obj, const std::vector<std::string>& known,
                const std::string& where, std::vector<std::string>& errors) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) errors.push_back(where + ": unknown key '" + key + "'");
  }
}

}  // namespace

ConfigResult parse_config(const nlohmann::json& j) {
  ConfigResult result;
  auto& errors = result.errors;
  if (!j.is_object()) {
    errors.push_back("config: top level must be a JSON object");
    return result;
  }
  check_keys(j, {"params", "sweep", "mode", "optimizer", "sim", "output", "meta"}, "config",
             errors);

  ExperimentSpec spec;

  if (j.contains("params")) {
    if (!j.at("params").is_object()) {
      errors.push_back("config: 'params' must be an object");
    } else {
      check_keys(j.at("params"),
                 {"slot_duration_s", "sensing_duration_s", "bandwidth_hz", "noise_psd_w_per_hz",
                  "packet_bits", "primary_power_w", "primary_arrival_rate",
                  "energy_arrival_rate", "energy_per_packet_j", "energy_capacity", "gain_ppd",
                  "gain_ssd", "eq7_mode"},
                 "config.params", errors);
      try {
        spec.params = system_params_from_json(j.at("params"));
      } catch (const ValidationError& e) {
        errors.push_back(std::string("config.params: ") + e.what());
      }
    }
  } else {
    for (const auto& msg : spec.params.check()) errors.push_back("config.params: " + msg);
  }

  if (j.contains("sweep")) {
    const json& sweep = j.at("sweep");
    if (!sweep.is_array()) {
      errors.push_back("config: 'sweep' must be an array of axes");
    } else {
      if (sweep.size() > 2) errors.push_back("config.sweep: at most two axes are supported");
      for (std::size_t a = 0; a < sweep.size(); ++a) {
        const std::string where = "config.sweep[" + std::to_string(a) + "]";
        const json& axis = sweep.at(a);
        if (!axis.is_object()) {
          errors.push_back(where + ": each axis must be an object");
          continue;
        }
        check_keys(axis, {"field", "values"}, where, errors);
        SweepAxis out;
        if (!axis.contains("field") || !axis.at("field").is_string()) {
          errors.push_back(where + ": 'field' must be a string");
        } else {
          out.field = axis.at("field").get<std::string>();
          bool known = false;
          for (const auto& f : sweepable_fields()) known = known || f == out.field;
          if (!known) errors.push_back(where + ": field '" + out.field + "' is not sweepable");
          for (const auto& other : spec.sweep)
            if (other.field == out.field)
              errors.push_back(where + ": field '" + out.field + "' appears twice");
        }
        if (!axis.contains("values") || !axis.at("values").is_array() ||
            axis.at("values").empty()) {
          errors.push_back(where + ": 'values' must be a nonempty array of numbers");
        } else {
          for (const auto& v : axis.at("values")) {
            if (!v.is_number()) {
              errors.push_back(where + ": 'values' must contain only numbers");
              break;
            }
            out.values.push_back(v.get<double>());
          }
          if (out.field == "energy_capacity") {
            for (double v : out.values) {
              if (v != std::floor(v) || v < 0) {
                errors.push_back(where + ": energy_capacity values must be nonnegative integers");
                break;
              }
            }
          }
        }
        spec.sweep.push_back(std::move(out));
      }
    }
  }

  if (j.contains("mode")) {
    try {
      if (!j.at("mode").is_string()) throw ValidationError("must be a string");
      spec.mode = run_mode_from_string(j.at("mode").get<std::string>());
    } catch (const ValidationError& e) {
      errors.push_back(std::string("config.mode: ") + e.what());
    }
  }

  if (j.contains("optimizer")) {
    try {
      if (!j.at("optimizer").is_string()) throw ValidationError("must be a string");
      spec.optimizer = optimizer_choice_from_string(j.at("optimizer").get<std::string>());
    } catch (const ValidationError& e) {
      errors.push_back(std::string("config.optimizer: ") + e.what());
    }
  }

  if (j.contains("sim")) {
    if (!j.at("sim").is_object()) {
      errors.push_back("config: 'sim' must be an object");
    } else {
      check_keys(j.at("sim"),
                 {"slots", "warmup_slots", "replications", "seed", "primary_model",
                  "service_mode", "threads"},
                 "config.sim", errors);
      try {
        spec.sim = sim_config_from_json(j.at("sim"));
      } catch (const ValidationError& e) {
        errors.push_back(std::string("config.sim: ") + e.what());
      }
    }
  }

  if (j.contains("output")) {
    if (!j.at("output").is_object()) {
      errors.push_back("config: 'output' must be an object");
    } else {
      check_keys(j.at("output"), {"csv", "manifest"}, "config.output", errors);
      const json& out = j.at("output");
      if (out.contains("csv")) {
        if (!out.at("csv").is_string())
          errors.push_back("config.output: 'csv' must be a string path");
        else
          spec.csv_path = out.at("csv").get<std::string>();
      }
      if (out.contains("manifest")) {
        if (!out.at("manifest").is_string())
          errors.push_back("config.output: 'manifest' must be a string path");
        else
          spec.manifest_path = out.at("manifest").get<std::string>();
      }
    }
  }

  if (j.contains("meta")) spec.meta = j.at("meta");

  // Validate every grid point the sweep will visit, while the guard holds.
  if (errors.empty()) {
    long points = 1;
    for (const auto& axis : spec.sweep) points *= static_cast<long>(axis.values.size());
    if (points > kGridGuard) {
      errors.push_back("config.sweep: grid has " + std::to_string(points) +
                       " points, above the guard of " + std::to_string(kGridGuard));
    } else {
      const long outer = spec.sweep.empty() ? 1 : static_cast<long>(spec.sweep[0].values.size());
      const long inner = spec.sweep.size() < 2 ? 1 : static_cast<long>(spec.sweep[1].values.size());
      for (long a = 0; a < outer; ++a) {
        for (long b = 0; b < inner; ++b) {
          SystemParams point = spec.params;
          try {
            if (!spec.sweep.empty()) apply_field(point, spec.sweep[0].field, spec.sweep[0].values[a]);
            if (spec.sweep.size() > 1) apply_field(point, spec.sweep[1].field, spec.sweep[1].values[b]);
          } catch (const ValidationError& e) {
            errors.push_back(std::string("config.sweep: ") + e.what());
            continue;
          }
          for (const auto& msg : point.check())
            errors.push_back("config.sweep: grid point (" + std::to_string(a) + "," +
                             std::to_string(b) + "): " + msg);
          if (spec.optimizer.source == PolicySource::enumeration && point.energy_capacity > 8)
            errors.push_back("config.sweep: grid point (" + std::to_string(a) + "," +
                             std::to_string(b) +
                             "): energy_capacity above the exhaustive-enumeration guard of 8");
          if (spec.optimizer.source == PolicySource::fixed &&
              spec.optimizer.fixed_g > point.energy_capacity)
            errors.push_back("config.sweep: grid point (" + std::to_string(a) + "," +
                             std::to_string(b) + "): fixed strategy threshold exceeds capacity");
        }
      }
    }
  }

  if (errors.empty()) result.spec = std::move(spec);
  return result;
}

ConfigResult load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult r;
    r.errors.push_back("config: cannot open '" + path + "'");
    return r;
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    ConfigResult r;
    r.errors.push_back(std::string("config: JSON parse error: ") + e.what());
    return r;
  }
  return parse_config(j);
}

namespace {

// Composes the per-state action list into the policy_id CSV cell; uses '-'
// rather than ',' so the cell never collides with the column separator.
std::string actions_suffix(const AccessPolicy& policy) {
  const auto actions = policy.deterministic_actions();
  if (!actions || actions->empty()) return "";
  std::string s = ":";
  for (std::size_t i = 0; i < actions->size(); ++i) {
    if (i) s += "-";
    s += std::to_string((*actions)[i]);
  }
  return s;
}

std::vector<std::string> column_list(RunMode mode) {
  std::vector<std::string> cols;
  std::string header = report_csv_header();
  if (mode != RunMode::analytic) header += "," + sim_csv_header_suffix();
  std::stringstream ss(header);
  std::string col;
  while (std::getline(ss, col, ',')) cols.push_back(col);
  return cols;
}

}  // namespace

SelectedPolicy select_policy(const SystemParams& params, const OptimizerChoice& choice) {
  switch (choice.source) {
    case PolicySource::enumeration: {
      OptimizationResult r = enumerate_deterministic(params);
      std::string id = "enum" + actions_suffix(r.policy);
      return {std::move(r.policy), std::move(id)};
    }
    case PolicySource::value_iteration: {
      OptimizationResult r = value_iteration(params);
      std::string id = "vi" + actions_suffix(r.policy);
      return {std::move(r.policy), std::move(id)};
    }
    case PolicySource::ascent: {
      OptimizationResult r = randomized_ascent(params);
      return {std::move(r.policy), "ascent"};
    }
    case PolicySource::fixed: {
      AccessPolicy p = fixed_strategy_policy(params, choice.fixed_g);
      return {std::move(p), "fixed:" + std::to_string(choice.fixed_g)};
    }
  }
  throw ValidationError("experiment: unknown optimizer choice");
}

nlohmann::json make_manifest(const ExperimentSpec& spec) {
  json sweep = json::array();
  for (const auto& axis : spec.sweep)
    sweep.push_back(json{{"field", axis.field}, {"values", axis.values}});

  json meta = spec.meta.is_object() ? spec.meta : json::object();
  meta["columns"] = column_list(spec.mode);
  meta["tool"] = json{{"name", "ehcr"}, {"version", "0.1.0"}};

  return json{{"params", to_json(spec.params)},
              {"sweep", std::move(sweep)},
              {"mode", to_string(spec.mode)},
              {"optimizer", to_string(spec.optimizer)},
              {"sim", to_json(spec.sim)},
              {"output", json{{"csv", spec.csv_path}, {"manifest", spec.manifest_path}}},
              {"meta", std::move(meta)}};
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.params.validate();
  spec.sim.validate();

  const long outer = spec.sweep.empty() ? 1 : static_cast<long>(spec.sweep[0].values.size());
  const long inner = spec.sweep.size() < 2 ? 1 : static_cast<long>(spec.sweep[1].values.size());
  const long points = outer * inner;
  if (points > kGridGuard)
    throw CapacityError("experiment: sweep grid exceeds the guard of " +
                        std::to_string(kGridGuard) + " points");

  // Per-point simulation seeds come from one stream over the master seed, so
  // a manifest re-run reproduces every draw no matter how rows are computed.
  SplitMix64 seed_stream(spec.sim.seed);
  std::vector<std::uint64_t> point_seeds(points);
  for (auto& s : point_seeds) s = seed_stream.next();

  ExperimentResult result;
  std::ostringstream csv;
  csv << report_csv_header();
  if (spec.mode != RunMode::analytic) csv << ',' << sim_csv_header_suffix();
  csv << '\n';

  for (long a = 0; a < outer; ++a) {
    for (long b = 0; b < inner; ++b) {
      SystemParams point = spec.params;
      if (!spec.sweep.empty()) apply_field(point, spec.sweep[0].field, spec.sweep[0].values[a]);
      if (spec.sweep.size() > 1) apply_field(point, spec.sweep[1].field, spec.sweep[1].values[b]);
      point.validate();

      ExperimentRow row;
      const SelectedPolicy chosen = select_policy(point, spec.optimizer);
      row.report = analyze_policy(point, chosen.policy, chosen.id);
      csv << report_csv_row(row.report);

      if (spec.mode != RunMode::analytic) {
        SimConfig sim = spec.sim;
        sim.seed = point_seeds[a * inner + b];
        row.sim = simulate(point, chosen.policy, sim);
        csv << ',' << sim_csv_row_suffix(*row.sim);
      }
      csv << '\n';
      result.rows.push_back(std::move(row));
    }
  }

  result.csv_text = csv.str();
  result.manifest = make_manifest(spec);

  if (!spec.csv_path.empty()) {
    std::ofstream out(spec.csv_path, std::ios::binary);
    if (!out) throw ValidationError("experiment: cannot write csv to '" + spec.csv_path + "'");
    out << result.csv_text;
  }
  if (!spec.manifest_path.empty()) {
    std::ofstream out(spec.manifest_path, std::ios::binary);
    if (!out)
      throw ValidationError("experiment: cannot write manifest to '" + spec.manifest_path + "'");
    out << result.manifest.dump(2) << '\n';
  }
  return result;
}

}  // namespace ehcr
