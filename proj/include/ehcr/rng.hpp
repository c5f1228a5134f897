#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace ehcr {

// SplitMix64 stream; used to derive independent sub-seeds (one per simulation
// replication, one per sweep grid point) from a single master seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Uniform draw in [0, 1) built from the top 53 bits, so results are identical
// across platforms (std::uniform_real_distribution is not portable).
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& gen, double p) { return uniform01(gen) < p; }

// Exponential with the given mean via inversion.
inline double exponential(std::mt19937_64& gen, double mean) {
  return -mean * std::log1p(-uniform01(gen));
}

// Poisson by sequential inversion; adequate for the small rates used here.
inline int poisson(std::mt19937_64& gen, double rate) {
  if (rate <= 0.0) return 0;
  const double u = uniform01(gen);
  double p = std::exp(-rate);
  double cdf = p;
  int k = 0;
  while (u >= cdf && k < 1000) {
    ++k;
    p *= rate / k;
    cdf += p;
  }
  return k;
}

// Index drawn from a finite pmf (assumed normalized); walks the cdf.
inline int categorical(std::mt19937_64& gen, std::span<const double> pmf) {
  const double u = uniform01(gen);
  double cdf = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    cdf += pmf[i];
    if (u < cdf) return static_cast<int>(i);
  }
  return static_cast<int>(pmf.size()) - 1;
}

}  // namespace ehcr
