#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ehcr/access_policy.hpp"
#include "ehcr/energy_chain.hpp"
#include "ehcr/errors.hpp"
#include "ehcr/poisson.hpp"
#include "ehcr/system_params.hpp"
#include "oracles.hpp"

using ehcr::AccessPolicy;
using ehcr::Matrix;
using ehcr::PoissonArrivals;
using ehcr::SystemParams;

namespace {

SystemParams params_with(int e_max, double harvest_rate) {
  SystemParams p;
  p.energy_capacity = e_max;
  p.energy_arrival_rate = harvest_rate / p.slot_duration_s;
  return p;
}

double residual_inf(const Matrix& kernel, const std::vector<double>& chi) {
  double worst = 0.0;
  for (int k = 0; k < kernel.cols(); ++k) {
    double next = 0.0;
    for (int n = 0; n < kernel.rows(); ++n) next += chi[n] * kernel(n, k);
    worst = std::max(worst, std::abs(next - chi[k]));
  }
  return worst;
}

}  // namespace

TEST_CASE("kernel matches the spend-then-harvest mixture form") {
  std::mt19937_64 gen(0xabcdu);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int e_max = static_cast<int>(6.0 * u(gen));
    const double rate = 4.0 * u(gen);
    const double pi = u(gen);
    const auto policy = ehcr::random_policy(e_max, gen);
    const auto kernel =
        ehcr::build_transition_matrix(policy.omega, PoissonArrivals(rate, e_max), pi);
    const auto expected = oracle::kernel_mixture(policy.omega, rate, pi);
    for (int n = 0; n <= e_max; ++n)
      for (int k = 0; k <= e_max; ++k)
        CHECK(kernel(n, k) == doctest::Approx(expected(n, k)).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("kernel rows are probability vectors across a wide random sweep") {
  std::mt19937_64 gen(0x5eedu);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int e_max = static_cast<int>(7.0 * u(gen));
    const double rate = trial % 17 == 0 ? 0.0 : 5.0 * u(gen);
    const double pi = u(gen);
    const auto policy = ehcr::random_policy(e_max, gen);
    const auto kernel =
        ehcr::build_transition_matrix(policy.omega, PoissonArrivals(rate, e_max), pi);
    for (int n = 0; n <= e_max; ++n) {
      double sum = 0.0;
      for (int k = 0; k <= e_max; ++k) {
        CHECK(kernel(n, k) >= -1e-15);
        CHECK(kernel(n, k) <= 1.0 + 1e-15);
        sum += kernel(n, k);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("empty-buffer row is the capped arrival distribution") {
  const auto p = params_with(3, 1.3);
  const auto kernel =
      ehcr::build_transition_matrix(p, AccessPolicy::uniform(3), 0.42);
  PoissonArrivals arrivals(1.3, 3);
  for (int k = 0; k < 3; ++k) CHECK(kernel(0, k) == doctest::Approx(arrivals.pmf(k)).epsilon(1e-14));
  CHECK(kernel(0, 3) == doctest::Approx(arrivals.tail(3)).epsilon(1e-14));
}

TEST_CASE("silent policy kernel does not depend on the idle probability") {
  const auto policy = AccessPolicy::silent(4);
  PoissonArrivals arrivals(0.8, 4);
  const auto a = ehcr::build_transition_matrix(policy.omega, arrivals, 0.1);
  const auto b = ehcr::build_transition_matrix(policy.omega, arrivals, 0.9);
  CHECK(a == b);
}

TEST_CASE("two-state chain matches frozen values and the balance equation") {
  const auto policy = AccessPolicy::from_actions({1});
  PoissonArrivals arrivals(1.0, 1);
  const auto kernel = ehcr::build_transition_matrix(policy.omega, arrivals, 0.5);

  // Hand values: from empty, stay empty only with zero arrivals; from full,
  // an idle slot spends the packet and zero arrivals must follow.
  const double p0 = 0.36787944117144232;
  CHECK(kernel(0, 0) == doctest::Approx(p0).epsilon(1e-14));
  CHECK(kernel(0, 1) == doctest::Approx(1.0 - p0).epsilon(1e-14));
  CHECK(kernel(1, 0) == doctest::Approx(0.5 * p0).epsilon(1e-14));
  CHECK(kernel(1, 1) == doctest::Approx(1.0 - 0.5 * p0).epsilon(1e-14));

  const auto chi = ehcr::stationary_distribution(kernel);
  const auto [chi0, chi1] = oracle::two_state_stationary(kernel(0, 1), kernel(1, 0));
  CHECK(chi[0] == doctest::Approx(chi0).epsilon(1e-12));
  CHECK(chi[1] == doctest::Approx(chi1).epsilon(1e-12));
  CHECK(chi[0] == doctest::Approx(0.22539967356056408).epsilon(1e-12));
  CHECK(chi[1] == doctest::Approx(0.77460032643943592).epsilon(1e-12));
}

TEST_CASE("with the primary never idle the full buffer is absorbing") {
  // No idle slots means nothing is ever spent, so under a positive harvest
  // rate the buffer fills and stays full regardless of the policy.
  const auto policy = AccessPolicy::from_actions({1});
  const auto kernel =
      ehcr::build_transition_matrix(policy.omega, PoissonArrivals(1.0, 1), 0.0);
  const auto chi = ehcr::stationary_distribution(kernel);
  CHECK(chi[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(chi[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stationary tail mass grows with the harvest rate") {
  // First-order dominance: a faster harvest can only shift the buffer law up.
  std::mt19937_64 gen(0xf05du);
  const double rates[] = {0.1, 0.3, 0.6, 1.0, 1.5, 2.2};
  for (int trial = 0; trial < 30; ++trial) {
    const int e_max = 1 + static_cast<int>(gen() % 4);
    const auto policy = ehcr::random_policy(e_max, gen);
    const double pi = 0.05 + 0.9 * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    std::vector<std::vector<double>> tails;
    for (double rate : rates) {
      const auto chi = ehcr::stationary_distribution(
          ehcr::build_transition_matrix(policy.omega, PoissonArrivals(rate, e_max), pi));
      std::vector<double> tail(chi.size());
      double acc = 0.0;
      for (int k = e_max; k >= 0; --k) {
        acc += chi[k];
        tail[k] = acc;
      }
      tails.push_back(tail);
    }
    for (std::size_t r = 1; r < tails.size(); ++r)
      for (std::size_t k = 0; k < tails[r].size(); ++k)
        CHECK(tails[r][k] >= tails[r - 1][k] - 1e-12);
  }
}

TEST_CASE("zero harvest with a silent policy freezes the buffer in place") {
  // The kernel is the identity: every state is absorbing and the chain is
  // reducible, so the stationary distribution is not unique. Any method must
  // still return a valid stationary point, and the damped iteration keeps its
  // uniform start, making the fallback path deterministic.
  const auto policy = AccessPolicy::silent(3);
  const auto kernel =
      ehcr::build_transition_matrix(policy.omega, PoissonArrivals(0.0, 3), 0.5);
  for (int n = 0; n <= 3; ++n) CHECK(kernel(n, n) == 1.0);

  const auto chi = ehcr::stationary_distribution(kernel);
  double sum = 0.0;
  for (double c : chi) {
    CHECK(c >= 0.0);
    sum += c;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(residual_inf(kernel, chi) <= 1e-10);

  const auto uniform =
      ehcr::stationary_distribution(kernel, ehcr::StationaryMethod::power_iteration);
  for (double c : uniform) CHECK(c == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("zero harvest with a spend-everything policy drains to empty") {
  const auto policy = AccessPolicy::from_actions({1, 2, 3});
  const auto kernel =
      ehcr::build_transition_matrix(policy.omega, PoissonArrivals(0.0, 3), 0.5);
  const auto chi = ehcr::stationary_distribution(kernel);
  CHECK(chi[0] == doctest::Approx(1.0).epsilon(1e-9));
  for (int k = 1; k <= 3; ++k) CHECK(chi[k] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("solver methods agree and honour the residual guarantee") {
  std::mt19937_64 gen(0x91u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int e_max = 1 + static_cast<int>(5.0 * u(gen));
    const double rate = 0.05 + 3.0 * u(gen);
    const double pi = 0.05 + 0.9 * u(gen);
    const auto policy = ehcr::random_policy(e_max, gen);
    const auto kernel =
        ehcr::build_transition_matrix(policy.omega, PoissonArrivals(rate, e_max), pi);

    const auto direct =
        ehcr::stationary_distribution(kernel, ehcr::StationaryMethod::direct_solve);
    const auto power =
        ehcr::stationary_distribution(kernel, ehcr::StationaryMethod::power_iteration);
    const auto automatic = ehcr::stationary_distribution(kernel);

    CHECK(residual_inf(kernel, direct) <= 1e-10);
    CHECK(residual_inf(kernel, power) <= 1e-10);
    CHECK(residual_inf(kernel, automatic) <= 1e-10);
    double sum = 0.0;
    for (std::size_t k = 0; k < direct.size(); ++k) {
      CHECK(direct[k] >= 0.0);
      CHECK(std::abs(direct[k] - power[k]) <= 1e-8);
      sum += direct[k];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stationary solve rejects malformed kernels") {
  SUBCASE("non-square") {
    Matrix m(2, 3);
    CHECK_THROWS_AS(ehcr::stationary_distribution(m), ehcr::ValidationError);
  }
  SUBCASE("row sums broken") {
    Matrix m(2, 2);
    m(0, 0) = 0.5;
    m(0, 1) = 0.2;
    m(1, 0) = 0.5;
    m(1, 1) = 0.5;
    CHECK_THROWS_AS(ehcr::stationary_distribution(m), ehcr::ValidationError);
  }
  SUBCASE("negative probability") {
    Matrix m(2, 2);
    m(0, 0) = 1.2;
    m(0, 1) = -0.2;
    m(1, 0) = 0.5;
    m(1, 1) = 0.5;
    CHECK_THROWS_AS(ehcr::stationary_distribution(m), ehcr::ValidationError);
  }
}

TEST_CASE("validated kernel construction checks its inputs") {
  const auto p = params_with(2, 1.0);
  CHECK_THROWS_AS(ehcr::build_transition_matrix(p, AccessPolicy::silent(2), -0.1),
                  ehcr::ValidationError);
  CHECK_THROWS_AS(ehcr::build_transition_matrix(p, AccessPolicy::silent(2), 1.1),
                  ehcr::ValidationError);
  // policy sized for a different buffer capacity
  CHECK_THROWS_AS(ehcr::build_transition_matrix(p, AccessPolicy::silent(3), 0.5),
                  ehcr::ValidationError);
}

TEST_CASE("single-state buffer is handled") {
  const auto p = params_with(0, 1.0);
  const auto chain = ehcr::build_energy_chain(p, AccessPolicy::silent(0), 0.5);
  CHECK(chain.transition(0, 0) == 1.0);
  CHECK(chain.stationary == std::vector<double>{1.0});
}

TEST_CASE("chain csv dump has one row per state plus the stationary row") {
  const auto p = params_with(2, 1.0);
  const auto chain = ehcr::build_energy_chain(p, AccessPolicy::uniform(2), 0.5);
  std::ostringstream out;
  ehcr::write_chain_csv(chain, out);
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) rows.push_back(oracle::split_csv(line));
  REQUIRE(rows.size() == 5);  // header + 3 kernel rows + stationary
  CHECK(rows[0][0] == "row");
  CHECK(rows[0].size() == 4);
  CHECK(rows[4][0] == "stationary");
  double sum = 0.0;
  for (int k = 1; k <= 3; ++k) sum += std::stod(rows[4][k]);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}
