// Acceptance runner: one PASS/FAIL line per criterion.
//
// Measurements come from the library batteries; every verdict is taken
// against the threshold table below, not the library defaults. A measurement
// whose base name has no entry here fails.

#include "chaplygin/verification.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace chaplygin;

namespace {

struct Pinned {
  Bound bound;
  double threshold;
};

const std::map<std::string, Pinned>& thresholds() {
  static const std::map<std::string, Pinned> table{
      // 1. algebra
      {"basis_orthonormality", {Bound::AtMost, 1e-13}},
      {"h_annihilates_en", {Bound::AtMost, 0.0}},
      {"jacobi_residual", {Bound::AtMost, 1e-12}},
      {"structure_antisymmetry", {Bound::AtMost, 0.0}},
      {"block_vanishing", {Bound::AtMost, 0.0}},
      {"c_Y3_Z1Z2_minus_one", {Bound::AtMost, 0.0}},
      {"coefficient_roundtrip", {Bound::AtMost, 1e-14}},
      // 2. frames and coframes
      {"coframe_duality", {Bound::AtMost, 1e-12}},
      {"structure_equations_closed_form", {Bound::AtMost, 1e-10}},
      {"structure_equations_finite_difference", {Bound::AtMost, 1e-10}},
      {"d_theta_plus_omega_S", {Bound::AtMost, 1e-9}},
      {"d_omega_S", {Bound::AtMost, 1e-9}},
      // 3. dynamics equivalence
      {"xnh_omega_nh_vs_omega_tilde", {Bound::AtMost, 1e-10}},
      {"xnh_solve_residual", {Bound::AtMost, 1e-10}},
      {"xnh_base_equals_u", {Bound::AtMost, 1e-10}},
      // 4. momentum map identity
      {"momentum_map_omega_tilde", {Bound::AtMost, 1e-9}},
      {"momentum_map_omega_nh_witness", {Bound::AtLeast, 1e-4}},
      // 5. conservation
      {"energy_drift", {Bound::AtMost, 1e-8}},
      {"momentum_drift", {Bound::AtMost, 1e-8}},
      {"orthogonality_defect", {Bound::AtMost, 1e-12}},
      {"orbit_invariant_drift", {Bound::AtMost, 1e-8}},
      {"integrator_order", {Bound::AtLeast, 3.5}},
      // 6. oracle equivalence
      {"oracle_deviation", {Bound::AtMost, 1e-6}},
      {"oracle_constraint_projection", {Bound::AtMost, 1e-9}},
      {"oracle_energy_drift", {Bound::AtMost, 1e-8}},
      {"homogeneous_multipliers", {Bound::AtMost, 1e-9}},
      // 7. homogeneous ball
      {"homogeneous_level_closedness", {Bound::AtMost, 1e-8}},
      {"homogeneous_zero_level_closedness", {Bound::AtMost, 1e-8}},
      {"straight_line_residual", {Bound::AtMost, 1e-8}},
      // 8. conformal Hamiltonization, n = 3
      {"f_omega_tilde_level_closedness", {Bound::AtMost, 1e-6}},
      {"closedness_separation", {Bound::AtLeast, 100.0}},
      {"conformal_factor_homogeneous", {Bound::AtMost, 1e-15}},
      {"conformal_factor_h_invariance", {Bound::AtMost, 1e-12}},
      {"conformal_trace_formula", {Bound::AtMost, 1e-8}},
      // 9. non-closedness
      {"omega_nh_non_closedness_witness", {Bound::AtLeast, 1e-3}},
      // 10. χ-connection
      {"sigma_of_xnh", {Bound::AtMost, 1e-12}},
      {"chi_idempotency", {Bound::AtMost, 1e-10}},
      {"truncated_jk_equals_lcurv", {Bound::AtMost, 1e-10}},
      {"truncated_jk_lcurv_xnh_contraction", {Bound::AtMost, 1e-10}},
      {"jk_lcurv_xnh_contraction", {Bound::AtMost, 1e-10}},
      // 11. relative equilibria
      {"equilibria_initial_g", {Bound::AtMost, 1e-12}},
      {"equilibria_invariance", {Bound::AtMost, 1e-8}},
      // 12. reduction audit
      {"reduced_dimension_mismatch", {Bound::AtMost, 0.0}},
      {"stabilizer_dimension_mismatch", {Bound::AtMost, 0.0}},
  };
  return table;
}

struct Criterion {
  int id;
  const char* title;
  std::function<std::vector<Measurement>(const VerifyOptions&)> measure;
};

// How close a passing value sits to its bound; larger is worse.
double tightness(const Measurement& m, const Pinned& pin) {
  if (pin.bound == Bound::AtMost) return pin.threshold > 0.0 ? m.value / pin.threshold : (m.value > 0.0 ? 1e300 : 0.0);
  return m.value > 0.0 ? pin.threshold / m.value : 1e300;
}

std::string describe(const Measurement& m, const Pinned* pin) {
  char buf[160];
  if (!pin) {
    std::snprintf(buf, sizeof buf, "%s=%.3e (no pinned threshold)", m.name.c_str(), m.value);
  } else {
    std::snprintf(buf, sizeof buf, "%s=%.3e (%s %g)", m.name.c_str(), m.value,
                  pin->bound == Bound::AtMost ? "<=" : ">=", pin->threshold);
  }
  return buf;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "algebra", measure_algebra},
      {2, "frames and coframes", measure_frames},
      {3, "dynamics equivalence", measure_dynamics_equivalence},
      {4, "truncation momentum identity", measure_momentum_identity},
      {5, "conservation and order", measure_conservation},
      {6, "oracle equivalence", measure_oracle_equivalence},
      {7, "homogeneous hamiltonicity", measure_homogeneous_hamiltonicity},
      {8, "n=3 hamiltonization", measure_hamiltonization},
      {9, "non-closedness witness", measure_non_closedness},
      {10, "chi-connection", measure_chi_connection},
      {11, "relative equilibria", measure_relative_equilibria},
      {12, "reduction audit", measure_reduction_audit},
  };
  const VerifyOptions options;  // n ∈ {3, 4}, fixed seed

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Measurement> ms = c.measure(options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::string failures;
    const Measurement* worst = nullptr;
    double worst_tightness = -1.0;
    for (const auto& m : ms) {
      const auto it = thresholds().find(base_name(m.name));
      const Pinned* pin = it == thresholds().end() ? nullptr : &it->second;
      if (!pin || !within(m.value, pin->bound, pin->threshold)) {
        failures += (failures.empty() ? "" : "; ") + describe(m, pin);
      } else if (const double t = tightness(m, *pin); t > worst_tightness) {
        worst_tightness = t;
        worst = &m;
      }
    }
    const bool ok = failures.empty() && !ms.empty();
    if (!ok) ++failed;
    std::string detail;
    if (ms.empty()) detail = "no measurements";
    else if (!ok) detail = failures;
    else detail = std::to_string(ms.size()) + " checks, tightest " +
                  describe(*worst, &thresholds().at(base_name(worst->name)));
    std::printf("%s  C%-2d %-30s %s [%.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.title, detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
