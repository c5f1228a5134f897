#pragma once

#include <string>
#include <vector>

#include "ehcr/access_policy.hpp"
#include "ehcr/energy_chain.hpp"
#include "ehcr/system_params.hpp"

namespace ehcr {

// Closed-form performance summary of one policy under one parameter set.
struct ThroughputReport {
  double lambda_p = 0.0;   // primary packet arrival rate (per slot)
  double lambda_e = 0.0;   // energy arrival rate (per second)
  double e_joules = 0.0;   // Joules per energy packet
  int e_max = 0;           // buffer capacity in energy packets
  double mu_p = 0.0;       // primary link success probability
  double pi_p = 0.0;       // fraction of idle slots seen by the SU (clamped at 0)
  bool pu_stable = false;  // primary queue stable, i.e. lambda_p < mu_p
  double mu_e = 0.0;       // mean energy packets spent per slot
  double mu_s = 0.0;       // SU throughput, packets per slot
  // chi_i * (expected delivery probability of the action drawn in state i);
  // mu_s == pi_p * sum(per_state_contrib).
  std::vector<double> per_state_contrib;
  std::string policy_id = "custom";
  Eq7Mode eq7 = Eq7Mode::literal;
};

// Long-run fraction of slots the primary queue is empty at sensing time:
// 1 - lambda_p / mu_p, clamped to 0 when the queue is unstable
// (lambda_p >= mu_p). Instability is reported, not an error.
double pu_idle_prob(const SystemParams& params);
bool pu_queue_stable(const SystemParams& params);

// Mean energy packets the policy spends per slot in steady state.
double energy_service_rate(const SystemParams& params, const AccessPolicy& policy,
                           const EnergyChain& chain);

// Mean packets the SU delivers per slot in steady state.
double su_throughput(const SystemParams& params, const AccessPolicy& policy,
                     const EnergyChain& chain);

// Builds the chain for the policy and assembles the full report.
ThroughputReport analyze_policy(const SystemParams& params, const AccessPolicy& policy,
                                const std::string& policy_id = "custom");

// Internal-consistency check applied again whenever a report is serialized.
void validate_report(const ThroughputReport& report);

// Fixed column order shared by every CSV this library emits.
std::string report_csv_header();
std::string report_csv_row(const ThroughputReport& report);

}  // namespace ehcr
