#pragma once

#include "chaplygin/forms.hpp"

#include <string>
#include <vector>

namespace chaplygin {

/// The two forms whose contraction with X_nh gives dH_c.
enum class DynamicsForm { OmegaNH, OmegaTilde };

const char* to_string(DynamicsForm form);
FormTag form_tag(DynamicsForm form);

/// X_nh at a point together with the residual of the linear solve.
struct FieldSample {
  TangentVectorTS X;
  Vector frame;  ///< X in frame coordinates (length 2m)
  double residual = 0.0;
  double rhs_norm = 0.0;
};

/// dH_c along the 2m frame fields.
Vector dH_frame(const FrameContext& ctx);

/**
 * @brief Solves i(X)ω = dH_c for X with ω ∈ {Ω_nh, Ω̃}.
 *
 * Assembles the frame Gram matrix W, solves Wᵀx = dH with partial pivoting
 * and throws SingularSystemError when the reciprocal condition estimate
 * falls below 1e-14.
 */
FieldSample solve_xnh(const BallModel& model, const PhasePoint& p,
                      DynamicsForm form = DynamicsForm::OmegaNH);

/// u̇ from the compressed field; the hot path of the integrators.
Vector body_acceleration(const BallModel& model, const PhasePoint& p,
                         DynamicsForm form = DynamicsForm::OmegaNH);

/// dJ_H as a dim h × 2m matrix in frame coordinates.
Matrix dJH_frame(const FrameContext& ctx);

/// dJ_H(v) as coefficients on the Y-block.
Vector dJH_directional(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v);

// ---------------------------------------------------------------------------
// Integration

struct IntegratorOptions {
  DynamicsForm form = DynamicsForm::OmegaNH;
  /// Integrate (1/f)X_nh and carry physical time as an extra state.
  bool reparam = false;
  /// Per-step energy guard relative to H_c(0); a trip throws NumericalGuardError.
  double energy_guard = 1e-3;
  /// Reorthonormalise s when ‖sᵀs − 1‖_max exceeds this.
  double reorthonormalize_above = 1e-13;
};

/// Integrator state: t is the integration parameter (τ when reparametrised),
/// x the contact point with x′ = Σ g_a e_a.
struct IntegratorState {
  double t = 0.0;
  double physical_time = 0.0;
  PhasePoint p;
  Vector x;
};

struct Trajectory {
  std::vector<IntegratorState> samples;
  double dt = 0.0;
  std::string integrator;
  DynamicsForm form = DynamicsForm::OmegaNH;
  bool reparam = false;
  int n = 0;
  double max_orthogonality_defect = 0.0;
  int reorthonormalizations = 0;
};

/// One RKMK4 step in the left trivialisation: s_{k+1} = s_k·exp(Θ).
IntegratorState rkmk4_step(const BallModel& model, const IntegratorState& state, double dt,
                           const IntegratorOptions& options = {});

/// Integrates over [0, T] with fixed step dt (T/dt rounded to the nearest
/// integer number of steps). Throws NumericalGuardError on an energy-guard trip.
Trajectory integrate(const BallModel& model, const PhasePoint& p0, double T, double dt,
                     const IntegratorOptions& options = {});

/// Classic RK4 on the entries of s with polar reprojection after each step.
Trajectory integrate_ambient(const BallModel& model, const PhasePoint& p0, double T, double dt,
                             DynamicsForm form = DynamicsForm::OmegaNH);

/// Largest max-norm difference of (s, u) between two trajectories on the same grid.
double trajectory_deviation(const Trajectory& a, const Trajectory& b);

/// Max distance of the contact points from their best-fit line.
double collinearity_residual(const Trajectory& trajectory);

struct DriftReport {
  double energy = 0.0;    ///< max_t |H_c(t) − H_c(0)|
  double momentum = 0.0;  ///< max_t, α |J_H(t)_α − J_H(0)_α|
};
DriftReport conservation_drift(const BallModel& model, const Trajectory& trajectory);

/// Step differences below this are rounding noise, not truncation error.
inline constexpr double kOrderRoundoffFloor = 1e-12;

struct OrderStudy {
  double order = 0.0;
  double coarse_error = 0.0;  ///< ‖y(dt) − y(dt/2)‖_max at T
  double fine_error = 0.0;    ///< ‖y(dt/2) − y(dt/4)‖_max at T
  bool resolved = false;      ///< fine_error above kOrderRoundoffFloor
};

/// Richardson estimate from endpoint states at dt, dt/2, dt/4.
OrderStudy order_study(const BallModel& model, const PhasePoint& p0, double T, double dt);
double order_estimate(const BallModel& model, const PhasePoint& p0, double T, double dt);

// ---------------------------------------------------------------------------
// Relative equilibria and reparametrisation

struct EquilibriumCheck {
  bool in_E = false;
  double max_g = 0.0;
};

EquilibriumCheck relative_equilibria_check(const BallModel& model, const PhasePoint& p, double tol);

/// max_t max_a |g_a| along a trajectory.
double max_abs_g(const BallModel& model, const Trajectory& trajectory);

struct ReparamReport {
  double max_deviation = 0.0;  ///< reparametrised samples vs interpolated original
  double energy_drift_original = 0.0;
  double energy_drift_reparam = 0.0;
  int matched_samples = 0;
};

/// Integrates X_nh over [0, T] and (1/f)X_nh until physical time T, then
/// matches every reparametrised sample against the original trajectory by
/// cubic Hermite interpolation in physical time.
ReparamReport reparam_consistency(const BallModel& model, const PhasePoint& p0, double T, double dt);

}  // namespace chaplygin
