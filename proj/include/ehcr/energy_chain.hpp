#pragma once

#include <iosfwd>
#include <vector>

#include "ehcr/access_policy.hpp"
#include "ehcr/matrix.hpp"
#include "ehcr/system_params.hpp"

namespace ehcr {

// One-slot Markov chain of the SU energy buffer under a fixed access policy.
struct EnergyChain {
  Matrix transition;               // row n -> pmf over next-slot buffer levels
  std::vector<double> stationary;  // chi, buffer-level distribution at slot start
};

// Transition kernel over buffer levels 0..E_max. Within a slot the buffer
// first loses the spent packets (only possible in an idle slot, probability
// pu_idle_prob), then gains the Poisson harvest, then is capped at E_max; the
// last column therefore absorbs the whole arrival tail.
Matrix build_transition_matrix(const SystemParams& params, const AccessPolicy& policy,
                               double pu_idle_prob);

// Same kernel from a raw policy matrix and a precomputed arrival table.
// Performs no validation, so rows slightly off the probability simplex
// (finite-difference probes during policy search) are accepted as-is.
Matrix build_transition_matrix(const Matrix& omega, const class PoissonArrivals& arrivals,
                               double pu_idle_prob);

enum class StationaryMethod {
  automatic,        // direct solve, fall back to power iteration if it degrades
  direct_solve,     // linear system (transition^T - I) chi = 0 with normalization
  power_iteration,  // damped fixed-point iteration from a uniform start
};

// Stationary distribution of a row-stochastic kernel. Guarantees
// ||chi^T P - chi^T||_inf <= residual_tol on return, otherwise throws
// NumericalError carrying the achieved residual.
std::vector<double> stationary_distribution(const Matrix& transition,
                                            StationaryMethod method = StationaryMethod::automatic,
                                            double residual_tol = 1e-10);

// Kernel plus its stationary distribution.
EnergyChain build_energy_chain(const SystemParams& params, const AccessPolicy& policy,
                               double pu_idle_prob);

// Debug dump: kernel rows then the stationary row, with state_* headers.
void write_chain_csv(const EnergyChain& chain, std::ostream& out);

}  // namespace ehcr
