#pragma once

#include "chaplygin/dynamics.hpp"

#include <vector>

namespace chaplygin {

/// Point of the full velocity phase space over Q = SO(n) × R^{n−1}.
struct FullState {
  GroupElement s;
  Vector x;
  AlgebraElement u;
  Vector xdot;
};

/// The rolling constraint ẋ = Σ g_a e_a residual, max-norm.
double constraint_residual(const BallModel& model, const FullState& state);

/// (s0, x0, u0, Σ g_a(u0) e_a).
FullState lift_initial(const BallModel& model, const PhasePoint& p0, const Vector& x0);

struct MultiplierSolution {
  Vector udot;
  Vector xddot;
  Vector lambda;
};

/**
 * @brief Accelerations and multipliers of the constrained Lagrangian system.
 *
 * L = ½⟨u, 𝕀u⟩ + ½|ẋ|² with constraints ẋ_a = ⟨Ad(s)u, Z_a⟩:
 *   𝕀u̇ = [𝕀u, u] + Σ λ_a Ad(s⁻¹)Z_a,   ẍ = −λ,
 * with λ fixed by the differentiated constraint ẍ_a = ⟨Ad(s)u̇, Z_a⟩.
 * Throws std::invalid_argument if the state is off the constraint by more
 * than 1e-6.
 */
MultiplierSolution multiplier_solve(const BallModel& model, const FullState& state);

struct OracleResidual {
  double euler_lagrange = 0.0;
  double constraint_derivative = 0.0;
};

/// Checks a multiplier solution in the space frame with matrix products only.
OracleResidual oracle_residual(const BallModel& model, const FullState& state,
                               const MultiplierSolution& solution);

/// ⟨𝕀u, Ad(s⁻¹)Y_α⟩ from matrices; the internal-symmetry momentum on Q.
Vector internal_momentum(const BallModel& model, const FullState& state);

/// ½⟨u, 𝕀u⟩ + ½|ẋ|².
double full_energy(const BallModel& model, const FullState& state);

struct FullSample {
  double t = 0.0;
  FullState state;
  Vector lambda;
};

struct ConstrainedTrajectory {
  std::vector<FullSample> samples;
  double dt = 0.0;
  double max_projection = 0.0;  ///< largest per-step correction of ẋ
  double max_lambda = 0.0;
};

/// RK4 on (s, x, u, ẋ) with polar retraction of s and a per-step projection
/// of ẋ onto the constraint. Throws NumericalGuardError when a projection
/// exceeds projection_guard.
ConstrainedTrajectory integrate_constrained(const BallModel& model, const FullState& state0,
                                            double T, double dt, double projection_guard = 1e-9);

/// max_t ‖(s, u)_full − (s, u)_compressed‖_max. Throws std::invalid_argument
/// on a time-grid mismatch.
double compare_projection(const ConstrainedTrajectory& full, const Trajectory& compressed);

}  // namespace chaplygin
