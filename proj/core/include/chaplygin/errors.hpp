#pragma once

#include <stdexcept>
#include <string>

namespace chaplygin {

/// Raised when a χ-based operation is evaluated too close to the relative
/// equilibria set, i.e. some |g_a| is below the U′ threshold.
class NearEquilibriumError : public std::runtime_error {
 public:
  explicit NearEquilibriumError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical guard tripped during time stepping (energy jump per step,
/// constraint drift).
class NumericalGuardError : public std::runtime_error {
 public:
  explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear system that should be regular was found singular.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

}  // namespace chaplygin
