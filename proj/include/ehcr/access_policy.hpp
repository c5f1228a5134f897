#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ehcr/matrix.hpp"

namespace ehcr {

// Randomized multi-level access strategy. omega(i, j) is the probability of
// spending j energy packets on a transmission when the buffer holds i packets
// and the channel is idle. Rows are pmfs supported on j <= i, so the matrix is
// lower-triangular and row-stochastic with (E_max + 1) rows and columns.
struct AccessPolicy {
  Matrix omega;

  int e_max() const { return omega.rows() - 1; }

  // Throws ValidationError unless omega is square, lower-triangular and
  // row-stochastic within tolerance.
  void validate() const;

  // Action vector (states 1..E_max) if every row is a point mass.
  std::optional<std::vector<int>> deterministic_actions() const;

  // Never transmits.
  static AccessPolicy silent(int e_max);

  // Uniform over the feasible actions 0..i in each state i.
  static AccessPolicy uniform(int e_max);

  // Deterministic policy; actions[i - 1] packets are spent in state i and
  // must not exceed i. actions.size() fixes E_max.
  static AccessPolicy from_actions(const std::vector<int>& actions);

  bool operator==(const AccessPolicy&) const = default;
};

// Policy with independent uniform-Dirichlet rows; used for randomized
// optimizer starts and property tests.
AccessPolicy random_policy(int e_max, std::mt19937_64& gen);

}  // namespace ehcr
