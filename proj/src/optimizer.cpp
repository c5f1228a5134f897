#include "ehcr/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ehcr/energy_chain.hpp"
#include "ehcr/errors.hpp"
#include "ehcr/link_model.hpp"
#include "ehcr/poisson.hpp"
#include "ehcr/rng.hpp"
#include "ehcr/throughput.hpp"

namespace ehcr {

std::string to_string(OptimizeMethod method) {
  switch (method) {
    case OptimizeMethod::enumeration: return "enum";
    case OptimizeMethod::value_iteration: return "vi";
    case OptimizeMethod::randomized_ascent: return "ascent";
  }
  return "unknown";
}

namespace {

constexpr double kEnumerationGuard = 1e6;
constexpr int kEnumerationMaxCapacity = 8;

double policy_space_size(int e_max) {
  double count = 1.0;
  for (int i = 1; i <= e_max; ++i) count *= i + 1;
  return count;
}

bool enumerable(int e_max) {
  return e_max <= kEnumerationMaxCapacity && policy_space_size(e_max) <= kEnumerationGuard;
}

// Precomputed pieces shared by the many evaluations an optimizer performs.
struct EvalContext {
  int e_max;
  double pi;
  PoissonArrivals arrivals;
  std::vector<double> p_succ;
  long evaluations = 0;

  explicit EvalContext(const SystemParams& params)
      : e_max(params.energy_capacity),
        pi(pu_idle_prob(params)),
        arrivals(params.harvest_per_slot(), params.energy_capacity) {
    p_succ.resize(e_max + 1);
    for (int j = 0; j <= e_max; ++j) p_succ[j] = secondary_success_prob(params, j);
  }

  // Checked path for valid policies: full stationary solve with residual
  // verification (robust to reducible chains, e.g. a zero harvest rate).
  double value_checked(const AccessPolicy& policy) {
    ++evaluations;
    const Matrix kernel = build_transition_matrix(policy.omega, arrivals, pi);
    const std::vector<double> chi = stationary_distribution(kernel);
    return value_from(policy.omega, chi);
  }

  // Probe path for gradient estimation: plain normalization-row solve with no
  // feasibility or residual checks, so matrices whose rows sit slightly off
  // the probability simplex (finite-difference probes) evaluate smoothly.
  double value_probe(const Matrix& omega) {
    ++evaluations;
    const Matrix kernel = build_transition_matrix(omega, arrivals, pi);
    const int n = kernel.rows();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = kernel(j, i) - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    const Eigen::VectorXd x = a.fullPivLu().solve(b);
    return value_from(omega, std::vector<double>(x.data(), x.data() + n));
  }

  double value_from(const Matrix& omega, const std::vector<double>& chi) const {
    double total = 0.0;
    for (int i = 1; i <= e_max; ++i) {
      double mean_success = 0.0;
      for (int j = 1; j <= i; ++j) mean_success += omega(i, j) * p_succ[j];
      total += chi[i] * mean_success;
    }
    return pi * total;
  }
};

// Euclidean projection onto the probability simplex (sort-based).
void project_simplex(std::span<double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double prefix = 0.0, rho_prefix = 1.0;
  int rho = 0;
  for (int i = 0; i < static_cast<int>(u.size()); ++i) {
    prefix += u[i];
    if (u[i] * (i + 1) > prefix - 1.0) {
      rho = i;
      rho_prefix = prefix;
    }
  }
  const double theta = (rho_prefix - 1.0) / (rho + 1);
  for (auto& x : v) x = std::max(x - theta, 0.0);
}

}  // namespace

OptimizationResult enumerate_deterministic(const SystemParams& params) {
  params.validate();
  const int e_max = params.energy_capacity;
  if (!enumerable(e_max))
    throw CapacityError("enumerate_deterministic: " + std::to_string(policy_space_size(e_max)) +
                        " deterministic policies exceeds the enumeration guard");

  EvalContext ctx(params);
  std::vector<int> actions(e_max, 0), best_actions(e_max, 0);
  double best = -std::numeric_limits<double>::infinity();
  long scanned = 0;
  while (true) {
    const double v = ctx.value_checked(AccessPolicy::from_actions(actions));
    ++scanned;
    if (v > best) {  // strict: ties keep the lexicographically smallest vector
      best = v;
      best_actions = actions;
    }
    int pos = e_max - 1;
    while (pos >= 0 && actions[pos] == pos + 1) actions[pos--] = 0;
    if (pos < 0) break;
    ++actions[pos];
  }

  OptimizationResult result;
  result.policy = AccessPolicy::from_actions(best_actions);
  result.mu_s = best;
  result.method = OptimizeMethod::enumeration;
  result.evaluations = ctx.evaluations;
  result.iterations = scanned;
  result.deterministic_best = best;
  return result;
}

OptimizationResult value_iteration(const SystemParams& params, ValueIterationOptions opts) {
  params.validate();
  if (!(opts.tolerance > 0.0) || opts.max_iters < 1 || opts.damping < 0.0 || opts.damping >= 1.0)
    throw ValidationError("value_iteration: bad options");

  const int e_max = params.energy_capacity;
  EvalContext ctx(params);
  // Next-level pmf from each post-spend level: the kernel of the
  // never-transmit policy (independent of the idle probability).
  const Matrix arr =
      build_transition_matrix(AccessPolicy::silent(e_max).omega, ctx.arrivals, 0.0);

  const double alpha = opts.damping;
  const double pi = ctx.pi;
  auto action_value = [&](int n, int j, const std::vector<double>& h) {
    double q = pi * ctx.p_succ[j] + alpha * h[n];
    for (int k = 0; k <= e_max; ++k)
      q += (1.0 - alpha) * (pi * arr(n - j, k) + (1.0 - pi) * arr(n, k)) * h[k];
    return q;
  };

  std::vector<double> h(e_max + 1, 0.0), w(e_max + 1, 0.0);
  double span = std::numeric_limits<double>::infinity();
  long iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    for (int n = 0; n <= e_max; ++n) {
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j <= n; ++j) best = std::max(best, action_value(n, j, h));
      w[n] = best;
    }
    double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;
    for (int n = 0; n <= e_max; ++n) {
      dmin = std::min(dmin, w[n] - h[n]);
      dmax = std::max(dmax, w[n] - h[n]);
    }
    span = dmax - dmin;
    const double ref = w[0];
    for (int n = 0; n <= e_max; ++n) h[n] = w[n] - ref;
    if (span < opts.tolerance) break;
  }
  if (span >= opts.tolerance)
    throw NumericalError("value_iteration: span did not converge within max_iters", span);

  std::vector<int> actions(e_max);
  for (int n = 1; n <= e_max; ++n) {
    std::vector<double> q(n + 1);
    double qmax = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= n; ++j) {
      q[j] = action_value(n, j, h);
      qmax = std::max(qmax, q[j]);
    }
    for (int j = 0; j <= n; ++j) {  // ties resolve to the smallest action
      if (q[j] >= qmax - 1e-13) {
        actions[n - 1] = j;
        break;
      }
    }
  }

  OptimizationResult result;
  result.policy = AccessPolicy::from_actions(actions);
  result.mu_s = ctx.value_checked(result.policy);
  result.method = OptimizeMethod::value_iteration;
  result.evaluations = ctx.evaluations;
  result.iterations = iter + 1;
  return result;
}

OptimizationResult randomized_ascent(const SystemParams& params, AscentOptions opts) {
  params.validate();
  if (opts.starts < 0 || opts.max_iters < 1 || !(opts.fd_step > 0.0) ||
      !(opts.step_init > 0.0) || opts.tolerance < 0.0)
    throw ValidationError("randomized_ascent: bad options");

  const int e_max = params.energy_capacity;
  EvalContext ctx(params);

  OptimizationResult result;
  result.method = OptimizeMethod::randomized_ascent;

  // Exhaustive deterministic reference: stall detector plus one warm start.
  std::optional<AccessPolicy> det_policy;
  if (enumerable(e_max)) {
    OptimizationResult det = enumerate_deterministic(params);
    result.deterministic_best = det.mu_s;
    result.evaluations += det.evaluations;
    det_policy = std::move(det.policy);
  }

  SplitMix64 seeds(opts.seed);
  std::mt19937_64 gen(seeds.next());
  std::vector<Matrix> inits;
  inits.push_back(AccessPolicy::uniform(e_max).omega);
  if (det_policy) inits.push_back(det_policy->omega);
  for (int s = 0; s < opts.starts; ++s) inits.push_back(random_policy(e_max, gen).omega);

  const double h = opts.fd_step;
  double best_value = -std::numeric_limits<double>::infinity();
  Matrix best_omega = inits.front();
  long total_iters = 0;

  for (const Matrix& init : inits) {
    Matrix om = init;
    double f = ctx.value_probe(om);
    double step = opts.step_init;
    int flat = 0;

    for (long it = 0; it < opts.max_iters; ++it) {
      ++total_iters;
      Matrix grad(e_max + 1, e_max + 1);
      for (int i = 1; i <= e_max; ++i) {
        for (int j = 0; j <= i; ++j) {
          om(i, j) += h;
          const double fp = ctx.value_probe(om);
          om(i, j) -= 2.0 * h;
          const double fm = ctx.value_probe(om);
          om(i, j) += h;
          grad(i, j) = (fp - fm) / (2.0 * h);
        }
      }

      // Backtracking line search on the projected step, growing the budget
      // after each success so flat stretches do not freeze progress.
      double t = step;
      bool accepted = false;
      double f_before = f;
      while (t > 1e-13) {
        Matrix cand = om;
        for (int i = 1; i <= e_max; ++i) {
          auto row = cand.row(i).subspan(0, i + 1);
          for (int j = 0; j <= i; ++j) row[j] = om(i, j) + t * grad(i, j);
          project_simplex(row);
        }
        const double fc = ctx.value_probe(cand);
        if (fc > f) {
          om = cand;
          f = fc;
          step = std::min(2.0 * t, 4.0);
          accepted = true;
          break;
        }
        t *= 0.5;
      }

      const double gain = accepted ? f - f_before : 0.0;
      if (gain < std::max(opts.tolerance, 1e-13)) {
        if (++flat >= 3) break;
      } else {
        flat = 0;
      }
    }

    if (f > best_value) {
      best_value = f;
      best_omega = om;
    }
  }

  result.policy = AccessPolicy{best_omega};
  result.policy.validate();
  result.mu_s = ctx.value_checked(result.policy);
  result.evaluations = ctx.evaluations;
  result.iterations = total_iters;
  if (result.deterministic_best)
    result.stalled = result.mu_s < *result.deterministic_best - 1e-9;
  return result;
}

AccessPolicy fixed_strategy_policy(const SystemParams& params, int g) {
  params.validate();
  if (g < 1 || g > params.energy_capacity)
    throw ValidationError("fixed_strategy_policy: g must lie in [1, E_max]");
  std::vector<int> actions(params.energy_capacity);
  for (int i = 1; i <= params.energy_capacity; ++i) actions[i - 1] = i >= g ? g : 0;
  return AccessPolicy::from_actions(actions);
}

}  // namespace ehcr
