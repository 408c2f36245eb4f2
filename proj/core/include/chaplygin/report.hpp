#pragma once

#include "chaplygin/scenario.hpp"
#include "chaplygin/verification.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chaplygin {

/// Bumped whenever a key is renamed or removed.
inline constexpr int kReportSchemaVersion = 1;

struct ClosednessRow {
  std::string form;
  double unrestricted = 0.0;
  double level_set = 0.0;
};

/// Everything cmd_run reports about a completed simulation.
struct RunDiagnostics {
  Scenario scenario;
  int steps = 0;

  double energy_initial = 0.0;
  double energy_drift = 0.0;
  Vector momentum_drift;  ///< per J_H component
  double orthogonality_defect = 0.0;
  int reorthonormalizations = 0;

  double constraint_residual = 0.0;  ///< full-space ẋ vs Σ g_a e_a, max over the run
  double constraint_projection = 0.0;
  double oracle_deviation = 0.0;

  std::vector<ClosednessRow> closedness;  ///< at the initial point

  double xnh_form_difference = 0.0;
  double momentum_map_residual = 0.0;
  /// Max |σ(X_nh)| over samples in U′; empty when the run never enters U′.
  std::optional<double> sigma_of_xnh;

  OrderStudy order;
  double order_T = 0.0;
  double order_dt = 0.0;

  double straight_line_residual = 0.0;
  bool straight_line = false;

  bool initial_in_E = false;
  double max_abs_g = 0.0;

  std::optional<ReparamReport> reparam;
};

/// Residual below which the contact path counts as a straight line.
inline constexpr double kStraightLineTolerance = 1e-8;

/// Runs every diagnostic for a trajectory produced from the scenario.
RunDiagnostics diagnose_run(const Scenario& scenario, const BallModel& model, const Trajectory& trajectory);

/// Header t, s_ij, u_k, H_c, J_k, g_a; LF endings; 17 significant digits.
/// t is physical time, also for reparametrised runs.
void write_trajectory_csv(std::ostream& out, const BallModel& model, const Trajectory& trajectory);

std::string render_run_report(const RunDiagnostics& diagnostics);
std::string render_verify_report(const SuiteReport& report, const VerifyOptions& options);

}  // namespace chaplygin
