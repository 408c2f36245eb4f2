#pragma once

#include "chaplygin/dynamics.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaplygin {

/// Malformed scenario text: bad syntax, unknown keys, wrong value types.
class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed scenario whose values violate an invariant.
class ScenarioValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief A simulation request read from a flat YAML mapping.
 *
 * Keys: name, n, inertia (identity | diagonal | full | principal3),
 * inertia_values, s0 (exponential coordinates), u0, T, dt,
 * form (omega_nh | omega_tilde), reparam, seed. When u0 is omitted a
 * random velocity is drawn from seed; s0 defaults to the identity.
 */
struct Scenario {
  std::string name = "scenario";
  int n = 3;
  std::string inertia = "identity";
  std::vector<double> inertia_values;
  std::vector<double> s0;
  std::vector<double> u0;
  double T = 10.0;
  double dt = 1e-3;
  DynamicsForm form = DynamicsForm::OmegaNH;
  bool reparam = false;
  std::uint64_t seed = 0;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Throws ScenarioValidationError.
void validate(const Scenario& scenario);

/// principal3 takes moments (I1, I2, I3) about e_1, e_2, e_3.
InertiaTensor build_inertia(const Scenario& scenario);
PhasePoint initial_point(const Scenario& scenario);

}  // namespace chaplygin
