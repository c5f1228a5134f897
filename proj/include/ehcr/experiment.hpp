#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehcr/simulator.hpp"
#include "ehcr/system_params.hpp"
#include "ehcr/throughput.hpp"

namespace ehcr {

enum class RunMode { analytic, simulate, both };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& s);

// Which policy is used at each grid point; all optimizers re-run per point.
enum class PolicySource { enumeration, value_iteration, ascent, fixed };

struct OptimizerChoice {
  PolicySource source = PolicySource::enumeration;
  int fixed_g = 1;  // threshold for PolicySource::fixed
};

std::string to_string(const OptimizerChoice& choice);
OptimizerChoice optimizer_choice_from_string(const std::string& s);

// One swept parameter: a field name and the values it takes.
struct SweepAxis {
  std::string field;
  std::vector<double> values;
};

// Fully resolved experiment description; serializes to the manifest that
// makes a run reproducible byte-for-byte.
struct ExperimentSpec {
  SystemParams params;
  std::vector<SweepAxis> sweep;  // 0..2 axes; outer axis first
  RunMode mode = RunMode::analytic;
  OptimizerChoice optimizer;
  SimConfig sim;
  std::string csv_path;       // empty: caller decides what to do with csv_text
  std::string manifest_path;  // empty: no manifest written
  nlohmann::json meta;        // free-form, echoed into the manifest
};

// Names accepted in sweep axes, in canonical order.
const std::vector<std::string>& sweepable_fields();

// Sets one parameter field by name; energy_capacity requires an integer value.
void apply_field(SystemParams& params, const std::string& field, double value);

struct ConfigResult {
  std::optional<ExperimentSpec> spec;  // set only when errors is empty
  std::vector<std::string> errors;     // every problem found, not just the first
};

// Parses and validates an experiment config (or a manifest, whose meta block
// is ignored on input). Collects all errors instead of stopping at the first.
ConfigResult parse_config(const nlohmann::json& j);
ConfigResult load_config(const std::string& path);

// Runs the configured optimizer at one parameter point and names the result
// (the id that lands in the policy_id CSV column).
struct SelectedPolicy {
  AccessPolicy policy;
  std::string id;
};

SelectedPolicy select_policy(const SystemParams& params, const OptimizerChoice& choice);

struct ExperimentRow {
  ThroughputReport report;
  std::optional<SimStats> sim;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::string csv_text;
  nlohmann::json manifest;
};

// Walks the sweep grid (outer axis slowest), re-optimizes the policy at each
// point, optionally simulates it with a per-point sub-seed, and assembles the
// CSV plus the manifest. Writes both files when paths are set in the spec.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// The manifest alone (fully resolved config + meta + column list).
nlohmann::json make_manifest(const ExperimentSpec& spec);

}  // namespace ehcr
