#include <random>

#include "doctest.h"
#include "ehcr/access_policy.hpp"
#include "ehcr/errors.hpp"
#include "ehcr/matrix.hpp"

using ehcr::AccessPolicy;
using ehcr::Matrix;

TEST_CASE("silent policy never spends") {
  const auto p = AccessPolicy::silent(3);
  CHECK(p.e_max() == 3);
  p.validate();
  const auto actions = p.deterministic_actions();
  REQUIRE(actions.has_value());
  CHECK(*actions == std::vector<int>{0, 0, 0});
}

TEST_CASE("uniform policy spreads mass over feasible spends") {
  const auto p = AccessPolicy::uniform(2);
  p.validate();
  CHECK(p.omega(0, 0) == 1.0);
  CHECK(p.omega(1, 0) == doctest::Approx(0.5));
  CHECK(p.omega(1, 1) == doctest::Approx(0.5));
  CHECK(p.omega(2, 1) == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(p.deterministic_actions().has_value());
}

TEST_CASE("action-vector construction round-trips") {
  const std::vector<int> actions{1, 0, 3};
  const auto p = AccessPolicy::from_actions(actions);
  p.validate();
  CHECK(p.e_max() == 3);
  const auto back = p.deterministic_actions();
  REQUIRE(back.has_value());
  CHECK(*back == actions);
  CHECK(p.omega(0, 0) == 1.0);
  CHECK(p.omega(2, 0) == 1.0);
  CHECK(p.omega(3, 3) == 1.0);
}

TEST_CASE("infeasible action vectors are rejected") {
  CHECK_THROWS_AS(AccessPolicy::from_actions({2}), ehcr::ValidationError);
  CHECK_THROWS_AS(AccessPolicy::from_actions({-1, 0}), ehcr::ValidationError);
  CHECK_THROWS_AS(AccessPolicy::silent(-1), ehcr::ValidationError);
}

TEST_CASE("validation rejects malformed distribution matrices") {
  SUBCASE("non-square") {
    Matrix m(2, 3);
    CHECK_THROWS_AS(AccessPolicy{m}.validate(), ehcr::ValidationError);
  }
  SUBCASE("mass above the diagonal, i.e. spending more than the buffer holds") {
    auto p = AccessPolicy::silent(2);
    p.omega(1, 2) = 1.0;
    p.omega(1, 0) = 0.0;
    p.omega(1, 1) = 0.0;
    CHECK_THROWS_AS(p.validate(), ehcr::ValidationError);
  }
  SUBCASE("negative entry") {
    auto p = AccessPolicy::silent(1);
    p.omega(1, 0) = 1.2;
    p.omega(1, 1) = -0.2;
    CHECK_THROWS_AS(p.validate(), ehcr::ValidationError);
  }
  SUBCASE("row does not sum to one") {
    auto p = AccessPolicy::silent(1);
    p.omega(1, 0) = 0.7;
    CHECK_THROWS_AS(p.validate(), ehcr::ValidationError);
  }
}

TEST_CASE("random policies are always valid and reproducible") {
  std::mt19937_64 gen(42);
  for (int e_max = 0; e_max <= 6; ++e_max) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = ehcr::random_policy(e_max, gen);
      p.validate();
      CHECK(p.e_max() == e_max);
    }
  }
  std::mt19937_64 a(7), b(7);
  CHECK(ehcr::random_policy(4, a).omega == ehcr::random_policy(4, b).omega);
}

TEST_CASE("idle state row is always a point mass on zero spend") {
  std::mt19937_64 gen(9);
  const auto p = ehcr::random_policy(5, gen);
  CHECK(p.omega(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}
