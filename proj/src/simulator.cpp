#include "ehcr/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "ehcr/errors.hpp"
#include "ehcr/link_model.hpp"
#include "ehcr/rng.hpp"
#include "ehcr/throughput.hpp"

namespace ehcr {

std::string to_string(PrimaryModel model) {
  return model == PrimaryModel::queue ? "queue" : "idle_iid";
}

PrimaryModel primary_model_from_string(const std::string& s) {
  if (s == "queue") return PrimaryModel::queue;
  if (s == "idle_iid") return PrimaryModel::idle_iid;
  throw ValidationError("unknown primary model '" + s + "' (expected queue|idle_iid)");
}

std::string to_string(PuServiceMode mode) {
  return mode == PuServiceMode::bernoulli ? "bernoulli" : "gain_draw";
}

PuServiceMode pu_service_mode_from_string(const std::string& s) {
  if (s == "bernoulli") return PuServiceMode::bernoulli;
  if (s == "gain_draw") return PuServiceMode::gain_draw;
  throw ValidationError("unknown service mode '" + s + "' (expected bernoulli|gain_draw)");
}

void SimConfig::validate() const {
  if (slots < 10000) throw ValidationError("sim config: slots must be at least 10000");
  if (warmup_slots < 0 || warmup_slots >= slots)
    throw ValidationError("sim config: warmup_slots must lie in [0, slots)");
  if (replications < 1) throw ValidationError("sim config: replications must be at least 1");
  if (threads < 0) throw ValidationError("sim config: threads must be nonnegative");
}

namespace {

struct RepResult {
  double mu_p = std::numeric_limits<double>::quiet_NaN();
  double pi_p = 0.0;
  double mu_e = 0.0;
  double mu_s = 0.0;
  std::vector<double> hist;
};

struct SlotModel {
  double lambda_p;
  double mu_p;
  double pi_p;
  double harvest_rate;
  double gain_mean;
  double gain_threshold;  // success iff the drawn channel gain clears it
  std::vector<double> p_succ;
  int e_max;
};

RepResult run_replication(const SlotModel& m, const AccessPolicy& policy,
                          const SimConfig& config, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  long queue = 0;
  int buffer = 0;
  const long measured = config.slots - config.warmup_slots;

  long busy_slots = 0, pu_delivered = 0, idle_slots = 0, spent = 0, su_delivered = 0;
  std::vector<long> occupancy(m.e_max + 1, 0);

  for (long slot = 0; slot < config.slots; ++slot) {
    const bool record = slot >= config.warmup_slots;
    if (record) ++occupancy[buffer];

    // Primary activity: the arrival joins the queue before sensing, so the
    // slot is idle only if the queue is empty right after the arrival epoch.
    bool idle;
    if (config.primary_model == PrimaryModel::queue) {
      if (bernoulli(gen, m.lambda_p)) ++queue;
      idle = queue == 0;
      if (!idle) {
        const bool ok = config.service_mode == PuServiceMode::bernoulli
                            ? bernoulli(gen, m.mu_p)
                            : exponential(gen, m.gain_mean) >= m.gain_threshold;
        if (ok) --queue;
        if (record) {
          ++busy_slots;
          pu_delivered += ok;
        }
      }
    } else {
      idle = bernoulli(gen, m.pi_p);
      if (!idle) {
        const bool ok = config.service_mode == PuServiceMode::bernoulli
                            ? bernoulli(gen, m.mu_p)
                            : exponential(gen, m.gain_mean) >= m.gain_threshold;
        if (record) {
          ++busy_slots;
          pu_delivered += ok;
        }
      }
    }

    // Secondary access in an idle slot: draw an action, spend, maybe deliver.
    if (idle) {
      if (record) ++idle_slots;
      const int action = categorical(gen, policy.omega.row(buffer).subspan(0, buffer + 1));
      if (action > 0) {
        const bool ok = bernoulli(gen, m.p_succ[action]);
        if (record) {
          spent += action;
          su_delivered += ok;
        }
        buffer -= action;
      }
    }

    // Harvest, then cap at the buffer size.
    const int gained = poisson(gen, m.harvest_rate);
    buffer = std::min(buffer + gained, m.e_max);
  }

  RepResult r;
  if (busy_slots > 0) r.mu_p = static_cast<double>(pu_delivered) / busy_slots;
  r.pi_p = static_cast<double>(idle_slots) / measured;
  r.mu_e = static_cast<double>(spent) / measured;
  r.mu_s = static_cast<double>(su_delivered) / measured;
  r.hist.resize(m.e_max + 1);
  for (int i = 0; i <= m.e_max; ++i) r.hist[i] = static_cast<double>(occupancy[i]) / measured;
  return r;
}

struct MeanSd {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
};

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / xs.size();
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / (xs.size() - 1));
  return out;
}

}  // namespace

SimStats simulate(const SystemParams& params, const AccessPolicy& policy,
                  const SimConfig& config) {
  params.validate();
  policy.validate();
  config.validate();
  if (policy.e_max() != params.energy_capacity)
    throw ValidationError("simulate: policy size does not match energy_capacity");

  SlotModel m;
  m.lambda_p = params.primary_arrival_rate;
  m.mu_p = primary_success_prob(params);
  m.pi_p = pu_idle_prob(params);
  m.harvest_rate = params.harvest_per_slot();
  m.gain_mean = params.gain_ppd;
  m.gain_threshold = params.noise_psd_w_per_hz * params.bandwidth_hz *
                     (std::exp2(params.primary_spectral_efficiency()) - 1.0) /
                     params.primary_power_w;
  m.e_max = params.energy_capacity;
  m.p_succ.resize(m.e_max + 1);
  for (int j = 0; j <= m.e_max; ++j) m.p_succ[j] = secondary_success_prob(params, j);

  // Replication seeds come from one SplitMix64 stream, fixed up front, so the
  // execution schedule cannot influence any draw.
  SplitMix64 seed_stream(config.seed);
  std::vector<std::uint64_t> rep_seeds(config.replications);
  for (auto& s : rep_seeds) s = seed_stream.next();

  std::vector<RepResult> reps(config.replications);
  const int hw_threads = static_cast<int>(std::thread::hardware_concurrency());
  const int threads = std::max(
      1, std::min(config.threads > 0 ? config.threads : hw_threads, config.replications));
  if (threads == 1) {
    for (int r = 0; r < config.replications; ++r)
      reps[r] = run_replication(m, policy, config, rep_seeds[r]);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int r = next.fetch_add(1); r < config.replications; r = next.fetch_add(1))
        reps[r] = run_replication(m, policy, config, rep_seeds[r]);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const int n = config.replications;
  const double t_quantile =
      n >= 2 ? boost::math::quantile(boost::math::students_t_distribution<double>(n - 1), 0.995)
             : std::numeric_limits<double>::quiet_NaN();
  auto summarize = [&](auto field, double& est, double& hw) {
    std::vector<double> xs;
    xs.reserve(n);
    for (const auto& rep : reps) {
      const double v = field(rep);
      if (!std::isnan(v)) xs.push_back(v);
    }
    const MeanSd ms = mean_sd(xs);
    est = ms.mean;
    hw = xs.size() >= 2 ? t_quantile * ms.sd / std::sqrt(static_cast<double>(xs.size()))
                        : std::numeric_limits<double>::quiet_NaN();
  };

  SimStats stats;
  summarize([](const RepResult& r) { return r.mu_p; }, stats.est_mu_p, stats.hw99_mu_p);
  summarize([](const RepResult& r) { return r.pi_p; }, stats.est_pi_p, stats.hw99_pi_p);
  summarize([](const RepResult& r) { return r.mu_e; }, stats.est_mu_e, stats.hw99_mu_e);
  summarize([](const RepResult& r) { return r.mu_s; }, stats.est_mu_s, stats.hw99_mu_s);

  stats.state_histogram.resize(m.e_max + 1);
  stats.state_histogram_se.resize(m.e_max + 1);
  for (int i = 0; i <= m.e_max; ++i) {
    std::vector<double> xs(n);
    for (int r = 0; r < n; ++r) xs[r] = reps[r].hist[i];
    const MeanSd ms = mean_sd(xs);
    stats.state_histogram[i] = ms.mean;
    stats.state_histogram_se[i] =
        n >= 2 ? ms.sd / std::sqrt(static_cast<double>(n)) : std::numeric_limits<double>::quiet_NaN();
  }

  stats.slots_per_rep = config.slots;
  stats.warmup_slots = config.warmup_slots;
  stats.replications = n;
  stats.seed = config.seed;
  stats.primary_model = config.primary_model;
  stats.service_mode = config.service_mode;
  return stats;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string sim_csv_header_suffix() {
  return "est_mu_p,est_pi_p,est_mu_e,est_mu_s,hw99_mu_p,hw99_pi_p,hw99_mu_e,hw99_mu_s";
}

std::string sim_csv_row_suffix(const SimStats& stats) {
  std::ostringstream oss;
  oss << fmt(stats.est_mu_p) << ',' << fmt(stats.est_pi_p) << ',' << fmt(stats.est_mu_e) << ','
      << fmt(stats.est_mu_s) << ',' << fmt(stats.hw99_mu_p) << ',' << fmt(stats.hw99_pi_p) << ','
      << fmt(stats.hw99_mu_e) << ',' << fmt(stats.hw99_mu_s);
  return oss.str();
}

}  // namespace ehcr
