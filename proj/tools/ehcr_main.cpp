#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ehcr/energy_chain.hpp"
#include "ehcr/errors.hpp"
#include "ehcr/experiment.hpp"
#include "ehcr/json_io.hpp"
#include "ehcr/optimizer.hpp"
#include "ehcr/simulator.hpp"
#include "ehcr/throughput.hpp"

namespace {

struct Overrides {
  std::string eq7, optimizer, primary_model, service_mode;
  long slots = -1, warmup = -1;
  int reps = -1;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

void add_common_flags(CLI::App* cmd, std::string& config_path, Overrides& ov) {
  cmd->add_option("-c,--config", config_path, "experiment config or manifest (JSON)");
  cmd->add_option("--eq7", ov.eq7, "secondary outage noise term: literal|bandwidth");
  cmd->add_option("--optimizer", ov.optimizer, "policy source: enum|vi|ascent|fixed:G");
}

void add_sim_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--slots", ov.slots, "slots per replication (includes warmup)");
  cmd->add_option("--warmup", ov.warmup, "warmup slots discarded per replication");
  cmd->add_option("--reps", ov.reps, "independent replications");
  cmd->add_option("--seed", ov.seed, "master RNG seed")->each([&ov](const std::string&) {
    ov.has_seed = true;
  });
  cmd->add_option("--primary", ov.primary_model, "primary activity model: queue|idle_iid");
  cmd->add_option("--service", ov.service_mode, "busy-slot departure draw: bernoulli|gain_draw");
}

ehcr::ExperimentSpec resolve_spec(const std::string& config_path, const Overrides& ov,
                                  bool allow_sweep) {
  ehcr::ExperimentSpec spec;
  if (!config_path.empty()) {
    ehcr::ConfigResult cfg = ehcr::load_config(config_path);
    if (!cfg.spec) {
      std::string msg = "configuration rejected:";
      for (const auto& e : cfg.errors) msg += "\n  - " + e;
      throw ehcr::ValidationError(msg);
    }
    spec = std::move(*cfg.spec);
  }
  if (!allow_sweep && !spec.sweep.empty())
    throw ehcr::ValidationError(
        "this command evaluates a single point; use the sweep command for grids");
  if (!ov.eq7.empty()) spec.params.eq7 = ehcr::eq7_mode_from_string(ov.eq7);
  if (!ov.optimizer.empty()) spec.optimizer = ehcr::optimizer_choice_from_string(ov.optimizer);
  if (ov.slots >= 0) spec.sim.slots = ov.slots;
  if (ov.warmup >= 0) spec.sim.warmup_slots = ov.warmup;
  if (ov.reps >= 0) spec.sim.replications = ov.reps;
  if (ov.has_seed) spec.sim.seed = ov.seed;
  if (!ov.primary_model.empty())
    spec.sim.primary_model = ehcr::primary_model_from_string(ov.primary_model);
  if (!ov.service_mode.empty())
    spec.sim.service_mode = ehcr::pu_service_mode_from_string(ov.service_mode);
  spec.params.validate();
  spec.sim.validate();
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ehcr::ValidationError("cannot write '" + path + "'");
  out << text;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Throughput model, access-policy optimizer and Monte Carlo simulator for an "
      "energy-harvesting secondary user sharing a slotted channel with a primary user"};
  app.require_subcommand(1);

  std::string config_path, out_path, manifest_path, dump_chain_path;
  Overrides ov;

  CLI::App* validate = app.add_subcommand("validate", "check a config and report every problem");
  std::string validate_path;
  validate->add_option("-c,--config", validate_path, "config file to check")->required();

  CLI::App* eval = app.add_subcommand("eval", "closed-form report for one parameter point");
  add_common_flags(eval, config_path, ov);
  eval->add_option("-o,--out", out_path, "write a one-row CSV here");
  eval->add_option("--dump-chain", dump_chain_path, "write the kernel and stationary law here");

  CLI::App* optimize = app.add_subcommand("optimize", "search for the best access policy");
  add_common_flags(optimize, config_path, ov);
  optimize->add_option("-o,--out", out_path, "write the optimizer result JSON here");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run at one parameter point");
  add_common_flags(simulate, config_path, ov);
  add_sim_flags(simulate, ov);
  simulate->add_option("-o,--out", out_path, "write a one-row CSV (analytic + estimates) here");

  CLI::App* sweep = app.add_subcommand("sweep", "run the full experiment grid from a config");
  add_common_flags(sweep, config_path, ov);
  add_sim_flags(sweep, ov);
  sweep->get_option("-c")->required();
  sweep->add_option("-o,--out", out_path, "override the CSV output path");
  sweep->add_option("--manifest", manifest_path, "override the manifest output path");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(validate)) {
    const ehcr::ConfigResult cfg = ehcr::load_config(validate_path);
    if (!cfg.spec) {
      std::cerr << "configuration rejected:\n";
      for (const auto& e : cfg.errors) std::cerr << "  - " << e << "\n";
      return 1;
    }
    long points = 1;
    for (const auto& axis : cfg.spec->sweep) points *= static_cast<long>(axis.values.size());
    std::cout << "configuration is valid: " << points << " grid point(s), mode "
              << ehcr::to_string(cfg.spec->mode) << ", optimizer "
              << ehcr::to_string(cfg.spec->optimizer) << "\n";
    return 0;
  }

  if (app.got_subcommand(eval)) {
    const ehcr::ExperimentSpec spec = resolve_spec(config_path, ov, false);
    const ehcr::SelectedPolicy chosen = ehcr::select_policy(spec.params, spec.optimizer);
    const ehcr::ThroughputReport report =
        ehcr::analyze_policy(spec.params, chosen.policy, chosen.id);
    nlohmann::json out{{"report", ehcr::to_json(report)},
                       {"policy", ehcr::to_json(chosen.policy).at("omega")}};
    std::cout << out.dump(2) << "\n";
    if (!out_path.empty())
      write_text(out_path, ehcr::report_csv_header() + "\n" + ehcr::report_csv_row(report) + "\n");
    if (!dump_chain_path.empty()) {
      const ehcr::EnergyChain chain = ehcr::build_energy_chain(
          spec.params, chosen.policy, ehcr::pu_idle_prob(spec.params));
      std::ofstream chain_out(dump_chain_path, std::ios::binary);
      if (!chain_out) throw ehcr::ValidationError("cannot write '" + dump_chain_path + "'");
      ehcr::write_chain_csv(chain, chain_out);
    }
    return 0;
  }

  if (app.got_subcommand(optimize)) {
    const ehcr::ExperimentSpec spec = resolve_spec(config_path, ov, false);
    nlohmann::json out;
    if (spec.optimizer.source == ehcr::PolicySource::fixed) {
      const ehcr::AccessPolicy policy =
          ehcr::fixed_strategy_policy(spec.params, spec.optimizer.fixed_g);
      const ehcr::ThroughputReport report = ehcr::analyze_policy(
          spec.params, policy, ehcr::to_string(spec.optimizer));
      out = nlohmann::json{{"method", ehcr::to_string(spec.optimizer)},
                           {"mu_s", report.mu_s},
                           {"policy", ehcr::to_json(policy).at("omega")}};
    } else if (spec.optimizer.source == ehcr::PolicySource::enumeration) {
      out = ehcr::to_json(ehcr::enumerate_deterministic(spec.params));
    } else if (spec.optimizer.source == ehcr::PolicySource::value_iteration) {
      out = ehcr::to_json(ehcr::value_iteration(spec.params));
    } else {
      out = ehcr::to_json(ehcr::randomized_ascent(spec.params));
    }
    std::cout << out.dump(2) << "\n";
    if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
    return 0;
  }

  if (app.got_subcommand(simulate)) {
    const ehcr::ExperimentSpec spec = resolve_spec(config_path, ov, false);
    const ehcr::SelectedPolicy chosen = ehcr::select_policy(spec.params, spec.optimizer);
    const ehcr::ThroughputReport report =
        ehcr::analyze_policy(spec.params, chosen.policy, chosen.id);
    const ehcr::SimStats stats = ehcr::simulate(spec.params, chosen.policy, spec.sim);
    nlohmann::json out{{"analytic", ehcr::to_json(report)}, {"sim", ehcr::to_json(stats)}};
    std::cout << out.dump(2) << "\n";
    if (!out_path.empty())
      write_text(out_path, ehcr::report_csv_header() + "," + ehcr::sim_csv_header_suffix() +
                               "\n" + ehcr::report_csv_row(report) + "," +
                               ehcr::sim_csv_row_suffix(stats) + "\n");
    return 0;
  }

  // sweep
  ehcr::ExperimentSpec spec = resolve_spec(config_path, ov, true);
  if (!out_path.empty()) spec.csv_path = out_path;
  if (!manifest_path.empty()) spec.manifest_path = manifest_path;
  const ehcr::ExperimentResult result = ehcr::run_experiment(spec);
  if (spec.csv_path.empty()) {
    std::cout << result.csv_text;
  } else {
    std::cout << "wrote " << result.rows.size() << " row(s) to " << spec.csv_path << "\n";
    if (!spec.manifest_path.empty())
      std::cout << "wrote manifest to " << spec.manifest_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ehcr::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << " (residual " << e.residual() << ")\n";
    return 2;
  } catch (const ehcr::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ehcr::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
