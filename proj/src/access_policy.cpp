#include "ehcr/access_policy.hpp"

#include <cmath>
#include <string>

#include "ehcr/errors.hpp"
#include "ehcr/rng.hpp"

namespace ehcr {

namespace {
constexpr double kEntryTol = 1e-12;
constexpr double kRowSumTol = 1e-9;
}  // namespace

void AccessPolicy::validate() const {
  if (omega.rows() < 1 || omega.rows() != omega.cols())
    throw ValidationError("access policy: omega must be square with at least one row");
  for (int i = 0; i < omega.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < omega.cols(); ++j) {
      const double w = omega(i, j);
      if (!std::isfinite(w))
        throw ValidationError("access policy: non-finite entry in row " + std::to_string(i));
      if (j > i && std::abs(w) > kEntryTol)
        throw ValidationError("access policy: row " + std::to_string(i) +
                              " assigns probability to more packets than the buffer holds");
      if (w < -kEntryTol || w > 1.0 + kEntryTol)
        throw ValidationError("access policy: entry out of [0, 1] in row " + std::to_string(i));
      sum += w;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw ValidationError("access policy: row " + std::to_string(i) +
                            " sums to " + std::to_string(sum) + ", expected 1");
  }
}

std::optional<std::vector<int>> AccessPolicy::deterministic_actions() const {
  std::vector<int> actions;
  for (int i = 1; i < omega.rows(); ++i) {
    int arg = -1;
    for (int j = 0; j <= i; ++j) {
      if (std::abs(omega(i, j) - 1.0) <= kEntryTol) arg = j;
    }
    if (arg < 0) return std::nullopt;
    actions.push_back(arg);
  }
  return actions;
}

AccessPolicy AccessPolicy::silent(int e_max) {
  if (e_max < 0) throw ValidationError("access policy: e_max must be nonnegative");
  AccessPolicy p{Matrix(e_max + 1, e_max + 1)};
  for (int i = 0; i <= e_max; ++i) p.omega(i, 0) = 1.0;
  return p;
}

AccessPolicy AccessPolicy::uniform(int e_max) {
  if (e_max < 0) throw ValidationError("access policy: e_max must be nonnegative");
  AccessPolicy p{Matrix(e_max + 1, e_max + 1)};
  for (int i = 0; i <= e_max; ++i)
    for (int j = 0; j <= i; ++j) p.omega(i, j) = 1.0 / (i + 1);
  return p;
}

AccessPolicy AccessPolicy::from_actions(const std::vector<int>& actions) {
  const int e_max = static_cast<int>(actions.size());
  AccessPolicy p{Matrix(e_max + 1, e_max + 1)};
  p.omega(0, 0) = 1.0;
  for (int i = 1; i <= e_max; ++i) {
    const int j = actions[i - 1];
    if (j < 0 || j > i)
      throw ValidationError("access policy: action for state " + std::to_string(i) +
                            " must lie in [0, " + std::to_string(i) + "]");
    p.omega(i, j) = 1.0;
  }
  return p;
}

AccessPolicy random_policy(int e_max, std::mt19937_64& gen) {
  if (e_max < 0) throw ValidationError("access policy: e_max must be nonnegative");
  AccessPolicy p{Matrix(e_max + 1, e_max + 1)};
  p.omega(0, 0) = 1.0;
  for (int i = 1; i <= e_max; ++i) {
    double sum = 0.0;
    for (int j = 0; j <= i; ++j) {
      p.omega(i, j) = exponential(gen, 1.0);
      sum += p.omega(i, j);
    }
    for (int j = 0; j <= i; ++j) p.omega(i, j) /= sum;
  }
  return p;
}

}  // namespace ehcr
