#include "ehcr/energy_chain.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>
#include <string>

#include "ehcr/errors.hpp"
#include "ehcr/poisson.hpp"

namespace ehcr {

Matrix build_transition_matrix(const Matrix& omega, const PoissonArrivals& arrivals,
                               double pu_idle_prob) {
  const int e_max = omega.rows() - 1;
  const double pi = pu_idle_prob;

  Matrix kernel(e_max + 1, e_max + 1);
  for (int n = 0; n <= e_max; ++n) {
    for (int k = 0; k < e_max; ++k) {
      double prob = 0.0;
      if (k < n) {
        // Reaching below the current level requires an idle slot in which at
        // least n - k packets were spent.
        for (int m = n - k; m <= n; ++m) prob += pi * omega(n, m) * arrivals.pmf(k - n + m);
      } else {
        for (int m = 0; m <= n; ++m) prob += pi * omega(n, m) * arrivals.pmf(k - n + m);
        prob += (1.0 - pi) * arrivals.pmf(k - n);
      }
      kernel(n, k) = prob;
    }
    // Full buffer absorbs every harvest that would overflow.
    double prob = 0.0;
    for (int m = 0; m <= n; ++m) prob += pi * omega(n, m) * arrivals.tail(e_max - n + m);
    prob += (1.0 - pi) * arrivals.tail(e_max - n);
    kernel(n, e_max) = prob;
  }
  return kernel;
}

Matrix build_transition_matrix(const SystemParams& params, const AccessPolicy& policy,
                               double pu_idle_prob) {
  params.validate();
  policy.validate();
  if (policy.e_max() != params.energy_capacity)
    throw ValidationError("energy chain: policy size does not match energy_capacity");
  if (!std::isfinite(pu_idle_prob) || pu_idle_prob < 0.0 || pu_idle_prob > 1.0)
    throw ValidationError("energy chain: pu_idle_prob must lie in [0, 1]");

  const PoissonArrivals arrivals(params.harvest_per_slot(), params.energy_capacity);
  return build_transition_matrix(policy.omega, arrivals, pu_idle_prob);
}

namespace {

void check_kernel(const Matrix& transition) {
  if (transition.rows() < 1 || transition.rows() != transition.cols())
    throw ValidationError("stationary_distribution: kernel must be square and nonempty");
  for (int i = 0; i < transition.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < transition.cols(); ++j) {
      const double p = transition(i, j);
      if (!std::isfinite(p) || p < -1e-12)
        throw ValidationError("stationary_distribution: kernel row " + std::to_string(i) +
                              " has a negative or non-finite entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError("stationary_distribution: kernel row " + std::to_string(i) +
                            " sums to " + std::to_string(sum) + ", expected 1");
  }
}

double stationary_residual(const Matrix& transition, const std::vector<double>& chi) {
  const int n = transition.rows();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    double next = 0.0;
    for (int i = 0; i < n; ++i) next += chi[i] * transition(i, k);
    worst = std::max(worst, std::abs(next - chi[k]));
  }
  return worst;
}

std::vector<double> solve_direct(const Matrix& transition) {
  const int n = transition.rows();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = transition(j, i) - (i == j ? 1.0 : 0.0);
  // Replace one balance equation (they are linearly dependent) with the
  // normalization constraint.
  for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::VectorXd x = a.fullPivLu().solve(b);

  std::vector<double> chi(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    chi[i] = x(i);
    sum += chi[i];
  }
  if (!(std::abs(sum - 1.0) < 1e-6)) return {};  // singular system, signal failure
  for (auto& c : chi) {
    if (c < -1e-9) return {};
    c = std::max(c, 0.0) / sum;
  }
  return chi;
}

// Damped fixed-point iteration x <- (x + xP) / 2 from a uniform start. The
// damping makes the chain aperiodic without moving its stationary set, and a
// uniform start selects a single well-defined limit even for reducible chains
// (e.g. a zero harvest rate), namely the uniform mixture of the absorbing
// components' stationary laws.
std::vector<double> solve_power(const Matrix& transition, double residual_tol) {
  const int n = transition.rows();
  std::vector<double> x(n, 1.0 / n), next(n);
  const int max_iters = 2'000'000;
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += x[i] * transition(i, k);
      next[k] = v;
    }
    double residual = 0.0;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      residual = std::max(residual, std::abs(next[k] - x[k]));
      x[k] = 0.5 * (x[k] + next[k]);
      sum += x[k];
    }
    for (int k = 0; k < n; ++k) x[k] /= sum;
    if (residual <= 0.05 * residual_tol) break;
  }
  return x;
}

}  // namespace

std::vector<double> stationary_distribution(const Matrix& transition, StationaryMethod method,
                                            double residual_tol) {
  check_kernel(transition);

  std::vector<double> chi;
  if (method == StationaryMethod::automatic || method == StationaryMethod::direct_solve) {
    chi = solve_direct(transition);
    if (!chi.empty() && stationary_residual(transition, chi) <= residual_tol) return chi;
    if (method == StationaryMethod::direct_solve) {
      const double residual = chi.empty() ? INFINITY : stationary_residual(transition, chi);
      throw NumericalError("stationary_distribution: direct solve residual above tolerance",
                           residual);
    }
  }

  chi = solve_power(transition, residual_tol);
  const double residual = stationary_residual(transition, chi);
  if (residual > residual_tol)
    throw NumericalError("stationary_distribution: power iteration residual above tolerance",
                         residual);
  return chi;
}

EnergyChain build_energy_chain(const SystemParams& params, const AccessPolicy& policy,
                               double pu_idle_prob) {
  EnergyChain chain;
  chain.transition = build_transition_matrix(params, policy, pu_idle_prob);
  chain.stationary = stationary_distribution(chain.transition);
  return chain;
}

void write_chain_csv(const EnergyChain& chain, std::ostream& out) {
  const int n = chain.transition.rows();
  out << "row";
  for (int k = 0; k < n; ++k) out << ",state_" << k;
  out << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << ',' << buf;
  };
  for (int i = 0; i < n; ++i) {
    out << "from_state_" << i;
    for (int k = 0; k < n; ++k) put(chain.transition(i, k));
    out << "\n";
  }
  out << "stationary";
  for (int k = 0; k < n; ++k) put(chain.stationary[k]);
  out << "\n";
}

}  // namespace ehcr
