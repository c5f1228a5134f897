#include "ehcr/throughput.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ehcr/errors.hpp"
#include "ehcr/link_model.hpp"

namespace ehcr {

double pu_idle_prob(const SystemParams& params) {
  const double mu_p = primary_success_prob(params);
  if (params.primary_arrival_rate >= mu_p) return 0.0;
  return 1.0 - params.primary_arrival_rate / mu_p;
}

bool pu_queue_stable(const SystemParams& params) {
  return params.primary_arrival_rate < primary_success_prob(params);
}

namespace {

void check_chain_matches(const SystemParams& params, const AccessPolicy& policy,
                         const EnergyChain& chain) {
  policy.validate();
  if (policy.e_max() != params.energy_capacity)
    throw ValidationError("throughput: policy size does not match energy_capacity");
  if (static_cast<int>(chain.stationary.size()) != params.energy_capacity + 1 ||
      chain.transition.rows() != params.energy_capacity + 1)
    throw ValidationError("throughput: chain size does not match energy_capacity");
}

}  // namespace

double energy_service_rate(const SystemParams& params, const AccessPolicy& policy,
                           const EnergyChain& chain) {
  params.validate();
  check_chain_matches(params, policy, chain);
  const double pi = pu_idle_prob(params);
  double spent = 0.0;
  for (int i = 0; i <= params.energy_capacity; ++i) {
    double mean_action = 0.0;
    for (int j = 1; j <= i; ++j) mean_action += policy.omega(i, j) * j;
    spent += chain.stationary[i] * mean_action;
  }
  return pi * spent;
}

double su_throughput(const SystemParams& params, const AccessPolicy& policy,
                     const EnergyChain& chain) {
  params.validate();
  check_chain_matches(params, policy, chain);
  const double pi = pu_idle_prob(params);
  double delivered = 0.0;
  for (int i = 0; i <= params.energy_capacity; ++i) {
    double mean_success = 0.0;
    for (int j = 1; j <= i; ++j)
      mean_success += policy.omega(i, j) * secondary_success_prob(params, j);
    delivered += chain.stationary[i] * mean_success;
  }
  return pi * delivered;
}

ThroughputReport analyze_policy(const SystemParams& params, const AccessPolicy& policy,
                                const std::string& policy_id) {
  params.validate();
  policy.validate();
  if (policy.e_max() != params.energy_capacity)
    throw ValidationError("throughput: policy size does not match energy_capacity");

  ThroughputReport report;
  report.lambda_p = params.primary_arrival_rate;
  report.lambda_e = params.energy_arrival_rate;
  report.e_joules = params.energy_per_packet_j;
  report.e_max = params.energy_capacity;
  report.mu_p = primary_success_prob(params);
  report.pi_p = pu_idle_prob(params);
  report.pu_stable = pu_queue_stable(params);
  report.policy_id = policy_id;
  report.eq7 = params.eq7;

  const EnergyChain chain = build_energy_chain(params, policy, report.pi_p);
  report.mu_e = energy_service_rate(params, policy, chain);

  report.per_state_contrib.resize(params.energy_capacity + 1);
  double total = 0.0;
  for (int i = 0; i <= params.energy_capacity; ++i) {
    double mean_success = 0.0;
    for (int j = 1; j <= i; ++j)
      mean_success += policy.omega(i, j) * secondary_success_prob(params, j);
    report.per_state_contrib[i] = chain.stationary[i] * mean_success;
    total += report.per_state_contrib[i];
  }
  report.mu_s = report.pi_p * total;
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void validate_report(const ThroughputReport& report) {
  const double contrib =
      std::accumulate(report.per_state_contrib.begin(), report.per_state_contrib.end(), 0.0);
  if (std::abs(report.mu_s - report.pi_p * contrib) > 1e-12)
    throw ValidationError("throughput report: mu_s disagrees with per-state contributions");
  if (report.pi_p < 0.0 || report.pi_p > 1.0 || report.mu_s < -1e-15 ||
      report.mu_s > report.pi_p + 1e-12)
    throw ValidationError("throughput report: rates out of range");
  if (report.mu_e > report.pi_p * report.e_max + 1e-12)
    throw ValidationError("throughput report: energy service rate exceeds its bound");
}

std::string report_csv_header() {
  return "lambda_p,lambda_e,e_joules,E_max,mu_p,pi_p,mu_e,mu_s,policy_id,eq7_mode";
}

std::string report_csv_row(const ThroughputReport& report) {
  validate_report(report);
  std::ostringstream oss;
  oss << fmt(report.lambda_p) << ',' << fmt(report.lambda_e) << ',' << fmt(report.e_joules)
      << ',' << report.e_max << ',' << fmt(report.mu_p) << ',' << fmt(report.pi_p) << ','
      << fmt(report.mu_e) << ',' << fmt(report.mu_s) << ',' << report.policy_id << ','
      << to_string(report.eq7);
  return oss.str();
}

}  // namespace ehcr
