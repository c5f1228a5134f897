#pragma once

#include <stdexcept>
#include <string>

namespace ehcr {

// Bad inputs: parameters out of range, malformed policies, inconsistent configs.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine failed to reach its accuracy target (e.g. a stationary
// solve whose residual stays above tolerance).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A request exceeds a deliberate size guard (e.g. exhaustive enumeration of a
// policy space too large to scan).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ehcr
