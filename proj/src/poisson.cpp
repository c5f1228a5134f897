#include "ehcr/poisson.hpp"

#include <cmath>

#include "ehcr/errors.hpp"

namespace ehcr {

double poisson_pmf(double rate, int k) {
  if (k < 0) throw ValidationError("poisson_pmf: k must be nonnegative");
  if (rate < 0.0 || !std::isfinite(rate)) {
    throw ValidationError("poisson_pmf: rate must be finite and nonnegative");
  }
  if (rate == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(rate) - rate - std::lgamma(k + 1.0));
}

PoissonArrivals::PoissonArrivals(double rate, int k_max) : rate_(rate), k_max_(k_max) {
  if (k_max < 0) throw ValidationError("PoissonArrivals: k_max must be nonnegative");
  pmf_.resize(k_max + 1);
  for (int k = 0; k <= k_max; ++k) pmf_[k] = poisson_pmf(rate, k);

  tail_.resize(k_max + 2);
  tail_[0] = 1.0;
  double cum = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    cum += pmf_[k];
    tail_[k + 1] = cum < 1.0 ? 1.0 - cum : 0.0;
  }
}

double PoissonArrivals::pmf(int k) const {
  if (k < 0 || k > k_max_) throw ValidationError("PoissonArrivals::pmf: k out of range");
  return pmf_[k];
}

double PoissonArrivals::tail(int k) const {
  if (k < 0 || k > k_max_ + 1) throw ValidationError("PoissonArrivals::tail: k out of range");
  return tail_[k];
}

}  // namespace ehcr
