#include "chaplygin/report.hpp"

#include "chaplygin/constrained_oracle.hpp"
#include "chaplygin/errors.hpp"
#include "chaplygin/reduction.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>

namespace chaplygin {
namespace {

using nlohmann::ordered_json;

constexpr int kTruncationSamples = 20;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// NaN and infinities become null rather than invalid JSON.
ordered_json value(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json values(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(value(x));
  return out;
}

Vector jh_coeffs(const BallModel& model, const PhasePoint& p) {
  return momentum_JH(model, p).coeffs().tail(model.algebra.dim_h());
}

void truncation_residuals(const BallModel& model, const Trajectory& traj, RunDiagnostics& d) {
  const TwoFormOnTS omega_tilde = compose_forms(FormTag::OmegaTilde);
  const int np = model.algebra.dim_perp();
  const auto count = static_cast<int>(traj.samples.size());
  const int stride = std::max(1, count / kTruncationSamples);
  for (int i = 0; i < count; i += stride) {
    const PhasePoint& p = traj.samples[i].p;
    const FrameContext ctx(model, p);
    const FieldSample a = solve_xnh(model, p, DynamicsForm::OmegaNH);
    const FieldSample b = solve_xnh(model, p, DynamicsForm::OmegaTilde);
    d.xnh_form_difference = std::max(d.xnh_form_difference, (a.frame - b.frame).cwiseAbs().maxCoeff());

    const Matrix djh = dJH_frame(ctx);
    const Matrix wt = omega_tilde.components(ctx);
    for (int alpha = 0; alpha < model.algebra.dim_h(); ++alpha)
      d.momentum_map_residual =
          std::max(d.momentum_map_residual, (wt.row(np + alpha) - djh.row(alpha)).cwiseAbs().maxCoeff());

    try {
      const double s = sigma_connection(ctx, a.frame).cwiseAbs().maxCoeff();
      d.sigma_of_xnh = std::max(d.sigma_of_xnh.value_or(0.0), s);
    } catch (const NearEquilibriumError&) {
      // σ is only defined on U′.
    }
  }
}

}  // namespace

RunDiagnostics diagnose_run(const Scenario& scenario, const BallModel& model, const Trajectory& traj) {
  RunDiagnostics d;
  d.scenario = scenario;
  d.steps = static_cast<int>(traj.samples.size()) - 1;
  const PhasePoint& p0 = traj.samples.front().p;

  d.energy_initial = compressed_hamiltonian(model, p0);
  const Vector j0 = jh_coeffs(model, p0);
  d.momentum_drift = Vector::Zero(j0.size());
  for (const auto& s : traj.samples) {
    d.energy_drift = std::max(d.energy_drift, std::abs(compressed_hamiltonian(model, s.p) - d.energy_initial));
    d.momentum_drift = d.momentum_drift.cwiseMax((jh_coeffs(model, s.p) - j0).cwiseAbs());
  }
  d.orthogonality_defect = traj.max_orthogonality_defect;
  d.reorthonormalizations = traj.reorthonormalizations;

  // The oracle runs on the physical-time grid, so compare against an
  // unreparametrised compressed run.
  IntegratorOptions plain;
  plain.form = scenario.form;
  const Trajectory reference = traj.reparam ? integrate(model, p0, scenario.T, scenario.dt, plain) : traj;
  const FullState lifted = lift_initial(model, p0, Vector::Zero(model.n() - 1));
  const ConstrainedTrajectory full = integrate_constrained(model, lifted, scenario.T, scenario.dt);
  for (const auto& s : full.samples)
    d.constraint_residual = std::max(d.constraint_residual, constraint_residual(model, s.state));
  d.constraint_projection = full.max_projection;
  d.oracle_deviation = compare_projection(full, reference);

  for (ClosednessForm form : {ClosednessForm::OmegaNH, ClosednessForm::OmegaTilde, ClosednessForm::FOmegaTilde}) {
    ClosednessRow row{to_string(form), closedness_verdict(model, p0, form, false), 0.0};
    try {
      row.level_set = closedness_verdict(model, p0, form, true);
    } catch (const std::runtime_error&) {
      row.level_set = std::numeric_limits<double>::quiet_NaN();
    }
    d.closedness.push_back(row);
  }

  truncation_residuals(model, traj, d);

  d.order_T = std::min(scenario.T, 2.0);
  d.order_dt = std::max(scenario.dt, 1e-2);
  d.order = order_study(model, p0, d.order_T, d.order_dt);

  d.straight_line_residual = collinearity_residual(traj);
  d.straight_line = d.straight_line_residual <= kStraightLineTolerance;

  d.initial_in_E = relative_equilibria_check(model, p0, kDefaultEquilibriumThreshold).in_E;
  d.max_abs_g = max_abs_g(model, traj);

  if (scenario.reparam) d.reparam = reparam_consistency(model, p0, scenario.T, scenario.dt);
  return d;
}

void write_trajectory_csv(std::ostream& out, const BallModel& model, const Trajectory& traj) {
  const int n = model.n();
  const int m = model.dim();
  const int nh = model.algebra.dim_h();
  out << "t";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) out << ",s_" << i << '_' << j;
  for (int k = 1; k <= m; ++k) out << ",u_" << k;
  out << ",H_c";
  for (int k = 1; k <= nh; ++k) out << ",J_" << k;
  for (int a = 1; a < n; ++a) out << ",g_" << a;
  out << '\n';

  for (const auto& s : traj.samples) {
    out << num(s.physical_time);
    const Matrix& mat = s.p.s.matrix();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out << ',' << num(mat(i, j));
    for (double c : s.p.u.coeffs()) out << ',' << num(c);
    out << ',' << num(compressed_hamiltonian(model, s.p));
    for (double c : jh_coeffs(model, s.p)) out << ',' << num(c);
    for (double c : coframe_coeffs(model, s.p).g) out << ',' << num(c);
    out << '\n';
  }
}

std::string render_run_report(const RunDiagnostics& d) {
  const Scenario& sc = d.scenario;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "run";
  j["scenario"] = {{"name", sc.name},   {"n", sc.n},   {"inertia", sc.inertia},
                   {"T", sc.T},         {"dt", sc.dt}, {"form", to_string(sc.form)},
                   {"reparam", sc.reparam}, {"seed", sc.seed}, {"steps", d.steps}};
  j["drifts"] = {{"energy_initial", value(d.energy_initial)},
                 {"energy", value(d.energy_drift)},
                 {"momentum", values(d.momentum_drift)}};
  j["integrator"] = {{"orthogonality_defect", value(d.orthogonality_defect)},
                     {"reorthonormalizations", d.reorthonormalizations},
                     {"order_estimate",
                      {{"value", value(d.order.order)},
                       {"resolved", d.order.resolved},
                       {"coarse_error", value(d.order.coarse_error)},
                       {"fine_error", value(d.order.fine_error)},
                       {"T", d.order_T},
                       {"dt", d.order_dt}}}};
  j["constraint"] = {{"residual", value(d.constraint_residual)}, {"max_projection", value(d.constraint_projection)}};
  j["oracle_deviation"] = value(d.oracle_deviation);

  ordered_json closed = ordered_json::object();
  for (const auto& row : d.closedness)
    closed[row.form] = {{"unrestricted", value(row.unrestricted)}, {"level_set", value(row.level_set)}};
  j["closedness"] = closed;

  j["truncation"] = {{"xnh_form_difference", value(d.xnh_form_difference)},
                     {"momentum_map_residual", value(d.momentum_map_residual)},
                     {"sigma_of_xnh", d.sigma_of_xnh ? value(*d.sigma_of_xnh) : ordered_json(nullptr)}};
  j["straight_line"] = {{"residual", value(d.straight_line_residual)}, {"flag", d.straight_line}};
  j["relative_equilibrium"] = {{"initial_in_E", d.initial_in_E}, {"max_abs_g", value(d.max_abs_g)}};
  if (d.reparam) {
    j["reparam"] = {{"max_deviation", value(d.reparam->max_deviation)},
                    {"energy_drift_original", value(d.reparam->energy_drift_original)},
                    {"energy_drift_reparam", value(d.reparam->energy_drift_reparam)},
                    {"matched_samples", d.reparam->matched_samples}};
  } else {
    j["reparam"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string render_verify_report(const SuiteReport& report, const VerifyOptions& options) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "verify";
  j["suite"] = report.suite;
  j["ns"] = options.ns;
  j["seed"] = options.seed;
  j["passed"] = report.passed();
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.measurement.name},
                      {"residual", value(c.measurement.value)},
                      {"bound", c.measurement.bound == Bound::AtMost ? "at_most" : "at_least"},
                      {"threshold", c.measurement.threshold},
                      {"passed", c.passed}});
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

}  // namespace chaplygin
