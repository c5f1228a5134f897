#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ehcr/access_policy.hpp"
#include "ehcr/system_params.hpp"

namespace ehcr {

enum class OptimizeMethod { enumeration, value_iteration, randomized_ascent };

std::string to_string(OptimizeMethod method);

struct OptimizationResult {
  AccessPolicy policy;
  double mu_s = 0.0;  // recomputed through the exact analytic path
  OptimizeMethod method = OptimizeMethod::enumeration;
  long evaluations = 0;  // stationary-chain evaluations performed
  long iterations = 0;   // optimizer iterations (method-specific meaning)
  // Exhaustive deterministic optimum, when small enough to enumerate; lets
  // randomized searches report whether they stalled below it.
  std::optional<double> deterministic_best;
  bool stalled = false;
};

// Scans every deterministic action vector (lexicographic order; first maximum
// wins ties, i.e. the lexicographically smallest optimal vector is returned).
// Throws CapacityError when the policy space exceeds the enumeration guard.
OptimizationResult enumerate_deterministic(const SystemParams& params);

struct ValueIterationOptions {
  double tolerance = 1e-12;  // span-seminorm stopping threshold
  long max_iters = 200000;
  double damping = 0.25;  // aperiodicity transform weight on self-loops
};

// Relative value iteration on the average-reward control problem whose gain
// is the SU throughput; extracts the greedy deterministic policy (ties go to
// the smallest action) and re-evaluates it exactly.
OptimizationResult value_iteration(const SystemParams& params, ValueIterationOptions opts = {});

struct AscentOptions {
  int starts = 8;            // random restarts in addition to the warm starts
  long max_iters = 400;      // gradient steps per start
  double tolerance = 1e-13;  // minimum per-step improvement counted as progress
  double fd_step = 1e-6;     // central finite-difference step
  double step_init = 0.5;    // initial line-search step
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;
};

// Projected gradient ascent over the randomized-policy polytope: finite
// difference gradients, per-row Euclidean simplex projection, backtracking
// line search with step growth, and a small patience budget per start.
// Starts from the uniform policy, the deterministic optimum (when it can be
// enumerated), and `starts` random policies.
OptimizationResult randomized_ascent(const SystemParams& params, AscentOptions opts = {});

// Threshold baseline: spend exactly `g` packets whenever the buffer holds at
// least `g`, otherwise stay silent. Requires 1 <= g <= E_max.
AccessPolicy fixed_strategy_policy(const SystemParams& params, int g);

}  // namespace ehcr
