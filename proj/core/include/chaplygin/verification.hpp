#pragma once

#include "chaplygin/son_algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chaplygin {

enum class Bound { AtMost, AtLeast };

/// One measured quantity with the library's default acceptance bound.
/// Names have the form "base[qualifier]", e.g. "jacobi_residual[n=4]".
struct Measurement {
  std::string name;
  double value = 0.0;
  Bound bound = Bound::AtMost;
  double threshold = 0.0;
};

std::string base_name(const std::string& measurement_name);
bool within(double value, Bound bound, double threshold);

struct VerifyOptions {
  std::vector<int> ns{3, 4};
  std::uint64_t seed = 20240611;
  /// Replaces the structure tensor in the algebra checks for every n whose
  /// dimension matches (used to exercise the failure path).
  std::optional<StructureTensor> structure_override;
};

// One battery per acceptance criterion. Each returns raw measurements; the
// caller decides pass/fail.
std::vector<Measurement> measure_algebra(const VerifyOptions& options);
std::vector<Measurement> measure_frames(const VerifyOptions& options);
std::vector<Measurement> measure_dynamics_equivalence(const VerifyOptions& options);
std::vector<Measurement> measure_momentum_identity(const VerifyOptions& options);
std::vector<Measurement> measure_conservation(const VerifyOptions& options);
std::vector<Measurement> measure_oracle_equivalence(const VerifyOptions& options);
std::vector<Measurement> measure_homogeneous_hamiltonicity(const VerifyOptions& options);
std::vector<Measurement> measure_hamiltonization(const VerifyOptions& options);
std::vector<Measurement> measure_non_closedness(const VerifyOptions& options);
std::vector<Measurement> measure_chi_connection(const VerifyOptions& options);
std::vector<Measurement> measure_relative_equilibria(const VerifyOptions& options);
std::vector<Measurement> measure_reduction_audit(const VerifyOptions& options);

struct CheckResult {
  Measurement measurement;
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Suite names: algebra, forms, truncation, hamiltonization, oracle, all.
const std::vector<std::string>& suite_names();

/// Runs a suite against the default thresholds. Throws std::invalid_argument
/// on an unknown suite name.
SuiteReport run_suite(const std::string& suite, const VerifyOptions& options);

}  // namespace chaplygin
