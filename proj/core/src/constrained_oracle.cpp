#include "chaplygin/constrained_oracle.hpp"

#include "chaplygin/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chaplygin {
namespace {

Vector contact_velocity(const BallModel& model, const GroupElement& s, const AlgebraElement& u) {
  return (adjoint_matrix(s) * u.coeffs()).head(model.algebra.dim_perp());
}

// The multipliers depend on (s, u) only; ẋ enters through the constraint.
MultiplierSolution solve_multipliers(const BallModel& model, const GroupElement& s, const Vector& u) {
  const Algebra& alg = model.algebra;
  const int np = alg.dim_perp();
  const Matrix R = adjoint_matrix(s);
  const Vector mu = model.inertia.matrix() * u;
  const Vector free_accel = model.inertia.inverse() * alg.structure().bracket(mu, u);
  const Matrix zeta = R.transpose().leftCols(np);  // body coefficients of ζ_a(s)

  const Matrix g = zeta.transpose() * model.inertia.inverse() * zeta;
  const Vector r = zeta.transpose() * free_accel;
  const Eigen::PartialPivLU<Matrix> lu(g + Matrix::Identity(np, np));
  if (!(lu.rcond() > 1e-14))
    throw SingularSystemError("multiplier_solve: singular multiplier system", 1.0 / lu.rcond());

  MultiplierSolution out;
  out.lambda = lu.solve(-r);
  out.udot = free_accel + model.inertia.inverse() * (zeta * out.lambda);
  out.xddot = -out.lambda;
  return out;
}

struct Derivative {
  Matrix sdot;
  Vector xdot;
  Vector udot;
  Vector xddot;
  Vector lambda;
};

Derivative rhs(const BallModel& model, const Matrix& s_raw, const Vector& u, const Vector& xdot) {
  const int n = model.n();
  MultiplierSolution sol = solve_multipliers(model, nearest_rotation(s_raw), u);
  return {s_raw * AlgebraElement::from_coeffs(u, n).matrix(), xdot, std::move(sol.udot),
          std::move(sol.xddot), std::move(sol.lambda)};
}

}  // namespace

double constraint_residual(const BallModel& model, const FullState& state) {
  return (state.xdot - contact_velocity(model, state.s, state.u)).cwiseAbs().maxCoeff();
}

FullState lift_initial(const BallModel& model, const PhasePoint& p0, const Vector& x0) {
  if (x0.size() != model.n() - 1) throw std::invalid_argument("lift_initial: x0 must have n-1 entries");
  return {p0.s, x0, p0.u, contact_velocity(model, p0.s, p0.u)};
}

MultiplierSolution multiplier_solve(const BallModel& model, const FullState& state) {
  const double off = constraint_residual(model, state);
  if (off > 1e-6) {
    std::ostringstream msg;
    msg << "multiplier_solve: state is off the constraint by " << off;
    throw std::invalid_argument(msg.str());
  }
  return solve_multipliers(model, state.s, state.u.coeffs());
}

OracleResidual oracle_residual(const BallModel& model, const FullState& state,
                               const MultiplierSolution& solution) {
  const int n = model.n();
  const Matrix& s = state.s.matrix();
  const Matrix u = state.u.matrix();
  const Matrix mu = AlgebraElement::from_coeffs(model.inertia.matrix() * state.u.coeffs(), n).matrix();
  const Matrix iudot =
      AlgebraElement::from_coeffs(model.inertia.matrix() * solution.udot, n).matrix();
  const Matrix udot = AlgebraElement::from_coeffs(solution.udot, n).matrix();

  // Space frame: Ad(s)([u, 𝕀u] + 𝕀u̇) = Σ λ_a Z_a, and Z_a is E_an − E_na.
  const Matrix lhs = s * (u * mu - mu * u + iudot) * s.transpose();
  Matrix force = Matrix::Zero(n, n);
  for (int a = 0; a < n - 1; ++a) {
    force(a, n - 1) += solution.lambda[a];
    force(n - 1, a) -= solution.lambda[a];
  }
  OracleResidual res;
  res.euler_lagrange = (lhs - force).cwiseAbs().maxCoeff();

  const Matrix space_udot = s * udot * s.transpose();
  double worst = 0.0;
  for (int a = 0; a < n - 1; ++a) {
    worst = std::max(worst, std::abs(solution.xddot[a] - space_udot(a, n - 1)));
    worst = std::max(worst, std::abs(solution.xddot[a] + solution.lambda[a]));
  }
  res.constraint_derivative = worst;
  return res;
}

Vector internal_momentum(const BallModel& model, const FullState& state) {
  const int n = model.n();
  const Matrix& s = state.s.matrix();
  const Matrix mu = AlgebraElement::from_coeffs(model.inertia.matrix() * state.u.coeffs(), n).matrix();
  const Matrix space = s * mu * s.transpose();
  Vector out(model.algebra.dim_h());
  for (int alpha = 1; alpha <= model.algebra.dim_h(); ++alpha)
    out[alpha - 1] = killing_ip(space, model.algebra.basis().Y(alpha));
  return out;
}

double full_energy(const BallModel& model, const FullState& state) {
  const Vector u = state.u.coeffs();
  return 0.5 * u.dot(model.inertia.matrix() * u) + 0.5 * state.xdot.squaredNorm();
}

ConstrainedTrajectory integrate_constrained(const BallModel& model, const FullState& state0,
                                            double T, double dt, double projection_guard) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_constrained: dt must be positive");
  const int n = model.n();
  const long steps = std::lround(T / dt);

  ConstrainedTrajectory traj;
  traj.dt = dt;
  traj.samples.reserve(steps + 1);
  FullState state = state0;
  Vector lambda = multiplier_solve(model, state).lambda;
  traj.samples.push_back({0.0, state, lambda});
  traj.max_lambda = lambda.cwiseAbs().maxCoeff();

  for (long k = 0; k < steps; ++k) {
    const Matrix s0 = state.s.matrix();
    const Vector u0 = state.u.coeffs();
    const Vector v0 = state.xdot;
    const Derivative k1 = rhs(model, s0, u0, v0);
    const Derivative k2 = rhs(model, s0 + 0.5 * dt * k1.sdot, u0 + 0.5 * dt * k1.udot, v0 + 0.5 * dt * k1.xddot);
    const Derivative k3 = rhs(model, s0 + 0.5 * dt * k2.sdot, u0 + 0.5 * dt * k2.udot, v0 + 0.5 * dt * k2.xddot);
    const Derivative k4 = rhs(model, s0 + dt * k3.sdot, u0 + dt * k3.udot, v0 + dt * k3.xddot);
    const double w = dt / 6.0;

    FullState next;
    next.s = nearest_rotation(s0 + w * (k1.sdot + 2.0 * k2.sdot + 2.0 * k3.sdot + k4.sdot));
    next.x = state.x + w * (k1.xdot + 2.0 * k2.xdot + 2.0 * k3.xdot + k4.xdot);
    next.u = AlgebraElement::from_coeffs(u0 + w * (k1.udot + 2.0 * k2.udot + 2.0 * k3.udot + k4.udot), n);
    const Vector xdot = v0 + w * (k1.xddot + 2.0 * k2.xddot + 2.0 * k3.xddot + k4.xddot);
    next.xdot = contact_velocity(model, next.s, next.u);
    const double projection = (next.xdot - xdot).cwiseAbs().maxCoeff();
    traj.max_projection = std::max(traj.max_projection, projection);
    if (projection > projection_guard) {
      std::ostringstream msg;
      msg << "constraint drift guard tripped at t=" << (k + 1) * dt << ": projection " << projection
          << " exceeds " << projection_guard;
      throw NumericalGuardError(msg.str());
    }
    lambda = multiplier_solve(model, next).lambda;
    traj.max_lambda = std::max(traj.max_lambda, lambda.cwiseAbs().maxCoeff());
    traj.samples.push_back({static_cast<double>(k + 1) * dt, next, lambda});
    state = std::move(next);
  }
  return traj;
}

double compare_projection(const ConstrainedTrajectory& full, const Trajectory& compressed) {
  if (full.samples.size() != compressed.samples.size())
    throw std::invalid_argument("compare_projection: time-grid mismatch (" +
                                std::to_string(full.samples.size()) + " vs " +
                                std::to_string(compressed.samples.size()) + " samples)");
  double worst = 0.0;
  for (std::size_t k = 0; k < full.samples.size(); ++k) {
    const FullSample& f = full.samples[k];
    const IntegratorState& c = compressed.samples[k];
    if (std::abs(f.t - c.physical_time) > 1e-9)
      throw std::invalid_argument("compare_projection: time-grid mismatch at sample " + std::to_string(k));
    worst = std::max(worst, (f.state.s.matrix() - c.p.s.matrix()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (f.state.u.coeffs() - c.p.u.coeffs()).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace chaplygin
