#include "chaplygin/dynamics.hpp"

#include "chaplygin/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chaplygin {
namespace {

const TwoFormOnTS& cached_form(DynamicsForm form) {
  static const TwoFormOnTS omega_nh = compose_forms(FormTag::OmegaNH);
  static const TwoFormOnTS omega_tilde = compose_forms(FormTag::OmegaTilde);
  return form == DynamicsForm::OmegaNH ? omega_nh : omega_tilde;
}

struct Rates {
  Vector udot;
  Vector g;
};

Rates rates(const BallModel& model, const PhasePoint& p, DynamicsForm form) {
  const FieldSample sample = solve_xnh(model, p, form);
  const int m = model.dim();
  const FrameContext ctx(model, p);
  return {sample.frame.tail(m), ctx.ut.head(model.algebra.dim_perp())};
}

Vector flatten(const PhasePoint& p) {
  const int n = p.s.n();
  const Vector u = p.u.coeffs();
  Vector y(n * n + u.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i * n + j] = p.s.matrix()(i, j);
  y.tail(u.size()) = u;
  return y;
}

double energy(const BallModel& model, const IntegratorState& s) {
  return compressed_hamiltonian(model, s.p);
}

void guard_energy(double h0, double h1, double guard, double t) {
  const double change = std::abs(h1 - h0);
  if (change > guard * h0) {
    std::ostringstream msg;
    msg << "energy guard tripped at t=" << t << ": |dH|=" << change << " exceeds " << guard
        << "*H=" << guard * h0 << "; reduce dt";
    throw NumericalGuardError(msg.str());
  }
}

}  // namespace

const char* to_string(DynamicsForm form) {
  return form == DynamicsForm::OmegaNH ? "omega_nh" : "omega_tilde";
}

FormTag form_tag(DynamicsForm form) {
  return form == DynamicsForm::OmegaNH ? FormTag::OmegaNH : FormTag::OmegaTilde;
}

Vector dH_frame(const FrameContext& ctx) {
  const BallModel& model = *ctx.model;
  const int m = model.dim();
  const Vector pg = model.algebra.perp_projector() * ctx.ut;
  const Vector iu = model.inertia.matrix() * ctx.u;
  Vector dh(2 * m);
  for (int i = 0; i < m; ++i) dh[i] = pg.dot(model.algebra.ad(i) * ctx.ut);
  for (int j = 0; j < m; ++j) dh[m + j] = iu[j] + pg.dot(ctx.R.col(j));
  return dh;
}

FieldSample solve_xnh(const BallModel& model, const PhasePoint& p, DynamicsForm form) {
  const FrameContext ctx(model, p);
  const Matrix w = cached_form(form).components(ctx);
  const Vector dh = dH_frame(ctx);
  const Matrix lhs = w.transpose();
  const Eigen::PartialPivLU<Matrix> lu(lhs);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "singular " << to_string(form) << " Gram matrix (condition estimate " << 1.0 / rcond << ")";
    throw SingularSystemError(msg.str(), 1.0 / rcond);
  }
  FieldSample out;
  out.frame = lu.solve(dh);
  out.residual = (lhs * out.frame - dh).norm();
  out.rhs_norm = dh.norm();
  out.X = from_frame_coords(ctx, out.frame);
  return out;
}

Vector body_acceleration(const BallModel& model, const PhasePoint& p, DynamicsForm form) {
  return solve_xnh(model, p, form).frame.tail(model.dim());
}

Matrix dJH_frame(const FrameContext& ctx) {
  const Algebra& alg = ctx.model->algebra;
  const int m = alg.dim();
  const int np = alg.dim_perp();
  Matrix d(alg.dim_h(), 2 * m);
  for (int dir = 0; dir < 2 * m; ++dir) d.col(dir) = context_derivative(ctx, dir).dmt.tail(m - np);
  return d;
}

Vector dJH_directional(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v) {
  const FrameContext ctx(model, p);
  return dJH_frame(ctx) * frame_coords(ctx, v);
}

// ---------------------------------------------------------------------------
// Integrators

IntegratorState rkmk4_step(const BallModel& model, const IntegratorState& state, double dt,
                           const IntegratorOptions& options) {
  const int n = model.n();
  const StructureTensor& c = model.algebra.structure();
  const Vector u0 = state.p.u.coeffs();

  struct Stage {
    Vector theta_dot;
    Vector udot;
    Vector xdot;
    double tdot;
  };
  const auto eval = [&](const Vector& theta, const Vector& u) {
    const GroupElement s = state.p.s * group_exp(AlgebraElement::from_coeffs(theta, n));
    const PhasePoint q{s, AlgebraElement::from_coeffs(u, n)};
    const double scale = options.reparam ? 1.0 / conformal_factor(model, s) : 1.0;
    const Vector w = scale * u;
    // Inverse of dexp for the left trivialisation, truncated at fourth order.
    const Vector tw = c.bracket(theta, w);
    const Rates r = rates(model, q, options.form);
    return Stage{w + 0.5 * tw + c.bracket(theta, tw) / 12.0, scale * r.udot, scale * r.g, scale};
  };

  const Vector zero = Vector::Zero(u0.size());
  const Stage k1 = eval(zero, u0);
  const Stage k2 = eval(0.5 * dt * k1.theta_dot, u0 + 0.5 * dt * k1.udot);
  const Stage k3 = eval(0.5 * dt * k2.theta_dot, u0 + 0.5 * dt * k2.udot);
  const Stage k4 = eval(dt * k3.theta_dot, u0 + dt * k3.udot);

  const auto combine = [dt](const Vector& a, const Vector& b, const Vector& c3, const Vector& d) {
    return (dt / 6.0 * (a + 2.0 * b + 2.0 * c3 + d)).eval();
  };
  IntegratorState next;
  next.t = state.t + dt;
  next.physical_time = state.physical_time + dt / 6.0 * (k1.tdot + 2.0 * k2.tdot + 2.0 * k3.tdot + k4.tdot);
  const Vector theta = combine(k1.theta_dot, k2.theta_dot, k3.theta_dot, k4.theta_dot);
  next.p.s = state.p.s * group_exp(AlgebraElement::from_coeffs(theta, n));
  next.p.u = AlgebraElement::from_coeffs(u0 + combine(k1.udot, k2.udot, k3.udot, k4.udot), n);
  next.x = state.x + combine(k1.xdot, k2.xdot, k3.xdot, k4.xdot);
  return next;
}

Trajectory integrate(const BallModel& model, const PhasePoint& p0, double T, double dt,
                     const IntegratorOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("integrate: T must be non-negative");
  const long steps = std::lround(T / dt);

  Trajectory traj;
  traj.dt = dt;
  traj.integrator = "rkmk4";
  traj.form = options.form;
  traj.reparam = options.reparam;
  traj.n = model.n();
  traj.samples.reserve(steps + 1);

  IntegratorState state;
  state.p = p0;
  state.x = Vector::Zero(model.n() - 1);
  traj.samples.push_back(state);
  traj.max_orthogonality_defect = p0.s.orthogonality_defect();
  for (long k = 0; k < steps; ++k) {
    IntegratorState next = rkmk4_step(model, state, dt, options);
    next.t = static_cast<double>(k + 1) * dt;
    if (!options.reparam) next.physical_time = next.t;
    if (next.p.s.orthogonality_defect() > options.reorthonormalize_above) {
      next.p.s = next.p.s.reorthonormalized();
      ++traj.reorthonormalizations;
    }
    traj.max_orthogonality_defect =
        std::max(traj.max_orthogonality_defect, next.p.s.orthogonality_defect());
    guard_energy(energy(model, state), energy(model, next), options.energy_guard, next.t);
    traj.samples.push_back(next);
    state = std::move(next);
  }
  return traj;
}

Trajectory integrate_ambient(const BallModel& model, const PhasePoint& p0, double T, double dt,
                             DynamicsForm form) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_ambient: dt must be positive");
  const int n = model.n();
  const long steps = std::lround(T / dt);

  Trajectory traj;
  traj.dt = dt;
  traj.integrator = "ambient_rk4_polar";
  traj.form = form;
  traj.n = n;
  IntegratorState state;
  state.p = p0;
  state.x = Vector::Zero(n - 1);
  traj.samples.push_back(state);

  struct Stage {
    Matrix sdot;
    Vector udot;
    Vector xdot;
  };
  // Stage points leave SO(n) at O(dt²); the field is evaluated at their polar factor.
  const auto eval = [&](const Matrix& s, const Vector& u) {
    const PhasePoint q{nearest_rotation(s), AlgebraElement::from_coeffs(u, n)};
    const Rates r = rates(model, q, form);
    return Stage{s * q.u.matrix(), r.udot, r.g};
  };

  for (long k = 0; k < steps; ++k) {
    const Matrix s0 = state.p.s.matrix();
    const Vector u0 = state.p.u.coeffs();
    const Stage k1 = eval(s0, u0);
    const Stage k2 = eval(s0 + 0.5 * dt * k1.sdot, u0 + 0.5 * dt * k1.udot);
    const Stage k3 = eval(s0 + 0.5 * dt * k2.sdot, u0 + 0.5 * dt * k2.udot);
    const Stage k4 = eval(s0 + dt * k3.sdot, u0 + dt * k3.udot);
    IntegratorState next;
    next.t = next.physical_time = static_cast<double>(k + 1) * dt;
    next.p.s = nearest_rotation(s0 + dt / 6.0 * (k1.sdot + 2.0 * k2.sdot + 2.0 * k3.sdot + k4.sdot));
    next.p.u = AlgebraElement::from_coeffs(
        u0 + dt / 6.0 * (k1.udot + 2.0 * k2.udot + 2.0 * k3.udot + k4.udot), n);
    next.x = state.x + dt / 6.0 * (k1.xdot + 2.0 * k2.xdot + 2.0 * k3.xdot + k4.xdot);
    traj.max_orthogonality_defect =
        std::max(traj.max_orthogonality_defect, next.p.s.orthogonality_defect());
    traj.samples.push_back(next);
    state = std::move(next);
  }
  return traj;
}

double trajectory_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.samples.size() != b.samples.size())
    throw std::invalid_argument("trajectory_deviation: time-grid mismatch (" +
                                std::to_string(a.samples.size()) + " vs " +
                                std::to_string(b.samples.size()) + " samples)");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    if (std::abs(a.samples[k].physical_time - b.samples[k].physical_time) > 1e-9)
      throw std::invalid_argument("trajectory_deviation: time-grid mismatch at sample " +
                                  std::to_string(k));
    worst = std::max(worst, (flatten(a.samples[k].p) - flatten(b.samples[k].p)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double collinearity_residual(const Trajectory& trajectory) {
  const auto& samples = trajectory.samples;
  if (samples.size() < 3) return 0.0;
  const int d = static_cast<int>(samples.front().x.size());
  Vector mean = Vector::Zero(d);
  for (const auto& s : samples) mean += s.x;
  mean /= static_cast<double>(samples.size());
  Matrix cov = Matrix::Zero(d, d);
  for (const auto& s : samples) cov += (s.x - mean) * (s.x - mean).transpose();
  if (cov.trace() == 0.0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector dir = eig.eigenvectors().col(d - 1);
  double worst = 0.0;
  for (const auto& s : samples) {
    const Vector c = s.x - mean;
    worst = std::max(worst, (c - c.dot(dir) * dir).norm());
  }
  return worst;
}

DriftReport conservation_drift(const BallModel& model, const Trajectory& trajectory) {
  DriftReport out;
  if (trajectory.samples.empty()) return out;
  const double h0 = compressed_hamiltonian(model, trajectory.samples.front().p);
  const Vector j0 = momentum_JH(model, trajectory.samples.front().p).coeffs();
  for (const auto& s : trajectory.samples) {
    out.energy = std::max(out.energy, std::abs(compressed_hamiltonian(model, s.p) - h0));
    out.momentum = std::max(out.momentum,
                            (momentum_JH(model, s.p).coeffs() - j0).cwiseAbs().maxCoeff());
  }
  return out;
}

OrderStudy order_study(const BallModel& model, const PhasePoint& p0, double T, double dt) {
  const auto endpoint = [&](double h) { return flatten(integrate(model, p0, T, h).samples.back().p); };
  const Vector y1 = endpoint(dt);
  const Vector y2 = endpoint(dt / 2.0);
  const Vector y3 = endpoint(dt / 4.0);
  OrderStudy out;
  out.coarse_error = (y1 - y2).cwiseAbs().maxCoeff();
  out.fine_error = (y2 - y3).cwiseAbs().maxCoeff();
  out.order = out.fine_error == 0.0 ? std::numeric_limits<double>::infinity()
                                    : std::log2(out.coarse_error / out.fine_error);
  out.resolved = out.fine_error > kOrderRoundoffFloor;
  return out;
}

double order_estimate(const BallModel& model, const PhasePoint& p0, double T, double dt) {
  return order_study(model, p0, T, dt).order;
}

// ---------------------------------------------------------------------------
// Relative equilibria and reparametrisation

EquilibriumCheck relative_equilibria_check(const BallModel& model, const PhasePoint& p, double tol) {
  const FrameContext ctx(model, p);
  const double g = ctx.ut.head(model.algebra.dim_perp()).cwiseAbs().maxCoeff();
  return {g <= tol, g};
}

double max_abs_g(const BallModel& model, const Trajectory& trajectory) {
  double worst = 0.0;
  for (const auto& s : trajectory.samples)
    worst = std::max(worst, relative_equilibria_check(model, s.p, 0.0).max_g);
  return worst;
}

ReparamReport reparam_consistency(const BallModel& model, const PhasePoint& p0, double T, double dt) {
  const Trajectory original = integrate(model, p0, T, dt);
  const int n = model.n();
  ReparamReport report;
  report.energy_drift_original = conservation_drift(model, original).energy;
  if (original.samples.size() < 2) return report;

  // Hermite data (value, physical-time derivative) at an original sample.
  const auto hermite_data = [&](const IntegratorState& s) {
    const Matrix sdot = s.p.s.matrix() * s.p.u.matrix();
    const Vector udot = body_acceleration(model, s.p);
    Vector y = flatten(s.p);
    Vector dy(y.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dy[i * n + j] = sdot(i, j);
    dy.tail(udot.size()) = udot;
    return std::pair{y, dy};
  };

  IntegratorOptions options;
  options.reparam = true;
  IntegratorState state;
  state.p = p0;
  state.x = Vector::Zero(n - 1);
  const double h0 = compressed_hamiltonian(model, p0);
  std::size_t cursor = 0;
  std::pair<Vector, Vector> left = hermite_data(original.samples[0]);
  std::pair<Vector, Vector> right = hermite_data(original.samples[1]);

  while (true) {
    IntegratorState next = rkmk4_step(model, state, dt, options);
    if (next.p.s.orthogonality_defect() > options.reorthonormalize_above)
      next.p.s = next.p.s.reorthonormalized();
    if (next.physical_time > original.samples.back().physical_time) break;
    report.energy_drift_reparam =
        std::max(report.energy_drift_reparam, std::abs(compressed_hamiltonian(model, next.p) - h0));

    const double t = next.physical_time;
    bool moved = false;
    while (cursor + 1 < original.samples.size() - 1 && original.samples[cursor + 1].physical_time < t) {
      ++cursor;
      moved = true;
    }
    if (moved) {
      left = hermite_data(original.samples[cursor]);
      right = hermite_data(original.samples[cursor + 1]);
    }
    const double t0 = original.samples[cursor].physical_time;
    const double h = original.samples[cursor + 1].physical_time - t0;
    const double th = (t - t0) / h;
    const double h00 = 2 * th * th * th - 3 * th * th + 1;
    const double h10 = th * th * th - 2 * th * th + th;
    const double h01 = -2 * th * th * th + 3 * th * th;
    const double h11 = th * th * th - th * th;
    const Vector interp =
        h00 * left.first + h10 * h * left.second + h01 * right.first + h11 * h * right.second;
    report.max_deviation =
        std::max(report.max_deviation, (interp - flatten(next.p)).cwiseAbs().maxCoeff());
    ++report.matched_samples;
    state = std::move(next);
  }
  return report;
}

}  // namespace chaplygin
