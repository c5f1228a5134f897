#pragma once

#include <vector>

namespace ehcr {

// P(K = k) for K ~ Poisson(rate). Computed in log space so large k and large
// rates stay finite. rate == 0 degenerates to a point mass at 0.
double poisson_pmf(double rate, int k);

// Cached Poisson pmf/tail table for energy-packet arrivals per slot.
// Holds pmf(0..k_max) and the upper tails P(K >= k) for k in 0..k_max+1,
// with the tails computed as complements so pmf and tail always sum to one.
class PoissonArrivals {
 public:
  PoissonArrivals(double rate, int k_max);

  double rate() const { return rate_; }
  int k_max() const { return k_max_; }

  double pmf(int k) const;   // k in [0, k_max]
  double tail(int k) const;  // P(K >= k), k in [0, k_max + 1]

 private:
  double rate_;
  int k_max_;
  std::vector<double> pmf_;
  std::vector<double> tail_;
};

}  // namespace ehcr
