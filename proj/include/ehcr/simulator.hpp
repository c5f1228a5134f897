#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ehcr/access_policy.hpp"
#include "ehcr/system_params.hpp"

namespace ehcr {

// How the primary user's activity is generated.
//  queue:    explicit Bernoulli-arrival / geometric-service queue; an idle
//            slot is one where the post-arrival queue is empty. Successive
//            slots are therefore correlated through the queue length.
//  idle_iid: each slot is idle independently with probability pi_p. This is
//            the independence assumption the closed-form chain is built on,
//            so only this model matches the analytics to within Monte Carlo
//            noise; the queue model exposes the (small) modeling gap.
enum class PrimaryModel { queue, idle_iid };

// How a busy slot resolves the primary departure: a direct Bernoulli draw on
// the success probability, or an exponential channel-gain draw compared
// against the decoding threshold. Statistically identical by construction.
enum class PuServiceMode { bernoulli, gain_draw };

std::string to_string(PrimaryModel model);
PrimaryModel primary_model_from_string(const std::string& s);
std::string to_string(PuServiceMode mode);
PuServiceMode pu_service_mode_from_string(const std::string& s);

struct SimConfig {
  long slots = 100000;        // per replication, including warmup (>= 10000)
  long warmup_slots = 10000;  // discarded prefix, < slots
  int replications = 10;
  std::uint64_t seed = 12345;  // master seed; replication seeds derive from it
  PrimaryModel primary_model = PrimaryModel::queue;
  PuServiceMode service_mode = PuServiceMode::bernoulli;
  int threads = 0;  // 0 = hardware concurrency; result is thread-count invariant

  void validate() const;
};

struct SimStats {
  // Means across replications; NaN where undefined (e.g. est_mu_p with no
  // busy slots, half-widths with a single replication).
  double est_mu_p = 0.0;
  double est_pi_p = 0.0;
  double est_mu_e = 0.0;
  double est_mu_s = 0.0;
  // 99% confidence half-widths from the replication-mean t-interval.
  double hw99_mu_p = 0.0;
  double hw99_pi_p = 0.0;
  double hw99_mu_e = 0.0;
  double hw99_mu_s = 0.0;
  // Buffer-level occupancy at slot start, and its standard error across
  // replications.
  std::vector<double> state_histogram;
  std::vector<double> state_histogram_se;

  long slots_per_rep = 0;
  long warmup_slots = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  PrimaryModel primary_model = PrimaryModel::queue;
  PuServiceMode service_mode = PuServiceMode::bernoulli;
};

// Slot-by-slot simulation of the primary activity, the SU policy draws and
// the energy buffer. Replications run in parallel but are seeded and reduced
// deterministically, so results are bit-identical for any thread count.
SimStats simulate(const SystemParams& params, const AccessPolicy& policy,
                  const SimConfig& config);

// CSV column extension appended to the analytic report columns.
std::string sim_csv_header_suffix();
std::string sim_csv_row_suffix(const SimStats& stats);

}  // namespace ehcr
