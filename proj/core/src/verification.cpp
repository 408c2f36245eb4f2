#include "chaplygin/verification.hpp"

#include "chaplygin/constrained_oracle.hpp"
#include "chaplygin/reduction.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <stdexcept>

namespace chaplygin {
namespace {

std::string tagged(const std::string& base, int n) { return base + "[n=" + std::to_string(n) + "]"; }

Measurement at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, Bound::AtMost, threshold};
}

Measurement at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, Bound::AtLeast, threshold};
}

std::uint64_t stream_seed(std::uint64_t seed, int criterion, int n) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(criterion) * 101ULL + static_cast<std::uint64_t>(n);
}

}  // namespace

std::string base_name(const std::string& measurement_name) {
  return measurement_name.substr(0, measurement_name.find('['));
}

bool within(double value, Bound bound, double threshold) {
  if (std::isnan(value)) return false;
  return bound == Bound::AtMost ? value <= threshold : value >= threshold;
}

// ---------------------------------------------------------------------------
// 1. Algebra

std::vector<Measurement> measure_algebra(const VerifyOptions& options) {
  std::vector<Measurement> out;
  for (int n : options.ns) {
    const AdaptedBasis basis = adapted_basis(n);
    const int m = basis.dim();
    StructureTensor c = structure_constants(basis);
    if (options.structure_override && options.structure_override->dim() == m) c = *options.structure_override;

    double ortho = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        ortho = std::max(ortho, std::abs(killing_ip(basis.elements[i], basis.elements[j]) - (i == j)));
    out.push_back(at_most(tagged("basis_orthonormality", n), ortho, 1e-13));

    double annihilation = 0.0;
    const Vector en = Vector::Unit(n, n - 1);
    for (int alpha = 1; alpha <= basis.dim_h(); ++alpha)
      annihilation = std::max(annihilation, (basis.Y(alpha) * en).cwiseAbs().maxCoeff());
    out.push_back(at_most(tagged("h_annihilates_en", n), annihilation, 0.0));

    out.push_back(at_most(tagged("jacobi_residual", n), c.jacobi_residual(), 1e-12));
    out.push_back(at_most(tagged("structure_antisymmetry", n), c.antisymmetry_residual(), 0.0));

    // [h, h] ⊆ h and [h, h⊥] ⊆ h⊥.
    const int np = basis.dim_perp();
    double blocks = 0.0;
    for (int b = np; b < m; ++b)
      for (int g = np; g < m; ++g) {
        for (int a = 0; a < np; ++a) blocks = std::max(blocks, std::abs(c(a, b, g)));
        for (int a = 0; a < np; ++a)
          for (int alpha = np; alpha < m; ++alpha) blocks = std::max(blocks, std::abs(c(alpha, b, a)));
      }
    out.push_back(at_most(tagged("block_vanishing", n), blocks, 0.0));

    if (n == 3) out.push_back(at_most("c_Y3_Z1Z2_minus_one[n=3]", std::abs(c(2, 0, 1) + 1.0), 0.0));

    Sampler sampler(stream_seed(options.seed, 1, n));
    double roundtrip = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Vector v = sampler.normal_vector(m);
      const AlgebraElement x = AlgebraElement::from_coeffs(v, n);
      roundtrip = std::max(roundtrip, (AlgebraElement(x.matrix()).coeffs() - v).cwiseAbs().maxCoeff());
    }
    out.push_back(at_most(tagged("coefficient_roundtrip", n), roundtrip, 1e-14));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2. Frames and coframes

std::vector<Measurement> measure_frames(const VerifyOptions& options) {
  std::vector<Measurement> out;
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 2, n));
    const BallModel model(n, sampler.spd_inertia(n));
    const Algebra& alg = model.algebra;
    const int m = alg.dim();
    const OneFormOnTS theta = theta_S_form();
    const TwoFormOnTS omega_s = compose_forms(FormTag::OmegaS);
    const ExteriorDerivativeOptions fd{DerivativeMode::FiniteDifference, 1e-4};

    double duality = 0.0, drho = 0.0, drho_fd = 0.0, dtheta = 0.0, domega = 0.0;
    for (int sample = 0; sample < 10; ++sample) {
      const PhasePoint p = sampler.phase_point(n);
      const FrameContext ctx(model, p);

      // Coframe on frame: ⟨Ad(s)B̂_j(s), B_k⟩ with B̂_j(s) = Ad(s⁻¹)B_j.
      for (int j = 0; j < m; ++j) {
        const AlgebraElement frame_vec = j < alg.dim_perp() ? frame_zeta(model, p.s, j + 1)
                                                            : frame_xi(model, p.s, j - alg.dim_perp() + 1);
        const Matrix space = p.s.matrix() * frame_vec.matrix() * p.s.matrix().transpose();
        for (int k = 0; k < m; ++k) {
          duality = std::max(duality, std::abs(killing_ip(space, alg.basis().elements[k]) - (j == k)));
          duality = std::max(duality, std::abs(coframe_form(k).evaluate(model, p, frame_field(model, p, j)) - (j == k)));
        }
      }

      for (int k = 0; k < m; ++k) {
        const OneFormOnTS kappa = coframe_form(k);
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j) {
            const std::vector<TangentVectorTS> pair{frame_field(model, p, i), frame_field(model, p, j)};
            const double expected = alg.structure()(k, i, j);
            drho = std::max(drho, std::abs(exterior_derivative(model, kappa, p, pair) - expected));
            drho_fd = std::max(drho_fd, std::abs(exterior_derivative(model, kappa, p, pair, fd) - expected));
          }
      }

      const Matrix w = omega_s.components(ctx);
      dtheta = std::max(dtheta, (exterior_derivative_tensor(model, theta, p) + w).cwiseAbs().maxCoeff());
      dtheta = std::max(dtheta, (exterior_derivative_tensor(model, theta, p, fd) + w).cwiseAbs().maxCoeff());
      for (const auto& opts : {ExteriorDerivativeOptions{}, fd}) {
        const FrameTensor3 d = exterior_derivative_tensor(model, omega_s, p, opts);
        for (int i = 0; i < 2 * m; ++i)
          for (int j = 0; j < 2 * m; ++j)
            for (int k = 0; k < 2 * m; ++k) domega = std::max(domega, std::abs(d(i, j, k)));
      }
    }
    out.push_back(at_most(tagged("coframe_duality", n), duality, 1e-12));
    out.push_back(at_most(tagged("structure_equations_closed_form", n), drho, 1e-10));
    out.push_back(at_most(tagged("structure_equations_finite_difference", n), drho_fd, 1e-10));
    out.push_back(at_most(tagged("d_theta_plus_omega_S", n), dtheta, 1e-9));
    out.push_back(at_most(tagged("d_omega_S", n), domega, 1e-9));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 3. Ω_nh and Ω̃ give the same field

std::vector<Measurement> measure_dynamics_equivalence(const VerifyOptions& options) {
  std::vector<Measurement> out;
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 3, n));
    double diff = 0.0, residual = 0.0, base = 0.0;
    for (int batch = 0; batch < 20; ++batch) {
      const BallModel model(n, sampler.spd_inertia(n));
      for (int k = 0; k < 50; ++k) {
        const PhasePoint p = sampler.phase_point(n);
        const FieldSample a = solve_xnh(model, p, DynamicsForm::OmegaNH);
        const FieldSample b = solve_xnh(model, p, DynamicsForm::OmegaTilde);
        diff = std::max(diff, (a.frame - b.frame).cwiseAbs().maxCoeff());
        residual = std::max({residual, a.residual / (1.0 + a.rhs_norm), b.residual / (1.0 + b.rhs_norm)});
        base = std::max(base, (a.X.a.coeffs() - p.u.coeffs()).cwiseAbs().maxCoeff());
      }
    }
    out.push_back(at_most(tagged("xnh_omega_nh_vs_omega_tilde", n), diff, 1e-10));
    out.push_back(at_most(tagged("xnh_solve_residual", n), residual, 1e-10));
    out.push_back(at_most(tagged("xnh_base_equals_u", n), base, 1e-10));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4. J_H is a momentum map for Ω̃ but not for Ω_nh

std::vector<Measurement> measure_momentum_identity(const VerifyOptions& options) {
  std::vector<Measurement> out;
  const TwoFormOnTS omega_tilde = compose_forms(FormTag::OmegaTilde);
  const TwoFormOnTS omega_nh = compose_forms(FormTag::OmegaNH);
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 4, n));
    double identity = 0.0, witness = 0.0;
    for (int batch = 0; batch < 20; ++batch) {
      const BallModel model(n, sampler.spd_inertia(n));
      const int np = model.algebra.dim_perp();
      for (int k = 0; k < 50; ++k) {
        const PhasePoint p = sampler.phase_point(n);
        const FrameContext ctx(model, p);
        const Matrix djh = dJH_frame(ctx);
        const Matrix wt = omega_tilde.components(ctx);
        const Matrix wn = omega_nh.components(ctx);
        for (int alpha = 0; alpha < model.algebra.dim_h(); ++alpha) {
          identity = std::max(identity, (wt.row(np + alpha) - djh.row(alpha)).cwiseAbs().maxCoeff());
          witness = std::max(witness, (wn.row(np + alpha) - djh.row(alpha)).cwiseAbs().maxCoeff());
        }
      }
    }
    out.push_back(at_most(tagged("momentum_map_omega_tilde", n), identity, 1e-9));
    out.push_back(at_least(tagged("momentum_map_omega_nh_witness", n), witness, 1e-4));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5. Conservation and integrator order

std::vector<Measurement> measure_conservation(const VerifyOptions& options) {
  std::vector<Measurement> out;
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 5, n));
    const BallModel model(n, sampler.spd_inertia(n));
    const PhasePoint p0 = sampler.phase_point(n);
    const Trajectory traj = integrate(model, p0, 10.0, 1e-3);
    const DriftReport drift = conservation_drift(model, traj);
    out.push_back(at_most(tagged("energy_drift", n), drift.energy, 1e-8));
    out.push_back(at_most(tagged("momentum_drift", n), drift.momentum, 1e-8));
    out.push_back(at_most(tagged("orthogonality_defect", n), traj.max_orthogonality_defect, 1e-12));

    double orbit = 0.0;
    const Vector inv0 = project_reduced(model, p0).orbit_invariants;
    for (const auto& s : traj.samples)
      orbit = std::max(orbit, (project_reduced(model, s.p).orbit_invariants - inv0).cwiseAbs().maxCoeff());
    out.push_back(at_most(tagged("orbit_invariant_drift", n), orbit, 1e-8));

    // Fast initial data so the truncation error sits well above rounding.
    PhasePoint fast = sampler.phase_point(n);
    fast.u = fast.u * (5.0 / fast.u.coeffs().norm());
    out.push_back(at_least(tagged("integrator_order", n), order_estimate(model, fast, 2.0, 4e-3), 3.5));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 6. Compressed vs constrained full-space dynamics

std::vector<Measurement> measure_oracle_equivalence(const VerifyOptions& options) {
  std::vector<Measurement> out;
  constexpr int kScenarios = 20;
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 6, n));
    struct Scenario {
      InertiaTensor inertia;
      PhasePoint p0;
      Vector x0;
    };
    std::vector<Scenario> scenarios;
    for (int k = 0; k < kScenarios; ++k) {
      InertiaTensor inertia = sampler.spd_inertia(n);
      PhasePoint p0 = sampler.phase_point(n);
      scenarios.push_back({std::move(inertia), std::move(p0), sampler.normal_vector(n - 1)});
    }
    struct Outcome {
      double deviation;
      double projection;
      double energy;
    };
    std::vector<std::future<Outcome>> jobs;
    for (const Scenario& sc : scenarios) {
      jobs.push_back(std::async(std::launch::async, [&sc, n] {
        const BallModel model(n, sc.inertia);
        const Trajectory compressed = integrate(model, sc.p0, 10.0, 1e-3);
        const ConstrainedTrajectory full =
            integrate_constrained(model, lift_initial(model, sc.p0, sc.x0), 10.0, 1e-3);
        double energy = 0.0;
        const double e0 = full_energy(model, full.samples.front().state);
        for (const auto& s : full.samples) energy = std::max(energy, std::abs(full_energy(model, s.state) - e0));
        return Outcome{compare_projection(full, compressed), full.max_projection, energy};
      }));
    }
    double deviation = 0.0, projection = 0.0, energy = 0.0;
    for (auto& job : jobs) {
      const Outcome o = job.get();
      deviation = std::max(deviation, o.deviation);
      projection = std::max(projection, o.projection);
      energy = std::max(energy, o.energy);
    }
    out.push_back(at_most(tagged("oracle_deviation", n), deviation, 1e-6));
    out.push_back(at_most(tagged("oracle_constraint_projection", n), projection, 1e-9));
    out.push_back(at_most(tagged("oracle_energy_drift", n), energy, 1e-8));

    const BallModel homogeneous(n, InertiaTensor::identity(n));
    const PhasePoint p0 = sampler.phase_point(n);
    const ConstrainedTrajectory free_roll =
        integrate_constrained(homogeneous, lift_initial(homogeneous, p0, Vector::Zero(n - 1)), 10.0, 1e-3);
    out.push_back(at_most(tagged("homogeneous_multipliers", n), free_roll.max_lambda, 1e-9));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 7. Homogeneous ball

std::vector<Measurement> measure_homogeneous_hamiltonicity(const VerifyOptions& options) {
  std::vector<Measurement> out;
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 7, n));
    const BallModel model(n, InertiaTensor::identity(n));
    const int nh = model.algebra.dim_h();
    double generic = 0.0, zero = 0.0;
    for (int k = 0; k < 50; ++k) {
      const PhasePoint p = sample_level_point(model, sampler.normal_vector(nh), sampler);
      generic = std::max(generic, closedness_verdict(model, p, ClosednessForm::OmegaTilde, true));
    }
    for (int k = 0; k < 10; ++k) {
      const PhasePoint p = sample_level_point(model, Vector::Zero(nh), sampler);
      zero = std::max(zero, closedness_verdict(model, p, ClosednessForm::OmegaTilde, true));
    }
    out.push_back(at_most(tagged("homogeneous_level_closedness", n), generic, 1e-8));
    out.push_back(at_most(tagged("homogeneous_zero_level_closedness", n), zero, 1e-8));

    double line = collinearity_residual(
        integrate(model, {GroupElement::identity(n), AlgebraElement(model.algebra.basis().Z(1))}, 10.0, 1e-3));
    for (int k = 0; k < 3; ++k)
      line = std::max(line, collinearity_residual(integrate(model, sampler.phase_point(n), 10.0, 1e-3)));
    out.push_back(at_most(tagged("straight_line_residual", n), line, 1e-8));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 8. Conformal Hamiltonization for n = 3

std::vector<Measurement> measure_hamiltonization(const VerifyOptions& options) {
  std::vector<Measurement> out;
  constexpr int n = 3;
  Sampler sampler(stream_seed(options.seed, 8, n));
  double restricted = 0.0, unrestricted = 0.0;
  for (int k = 0; k < 50; ++k) {
    const BallModel model(n, sampler.spd_inertia(n));
    const PhasePoint p = sample_level_point(model, sampler.normal_vector(1), sampler);
    restricted = std::max(restricted, closedness_verdict(model, p, ClosednessForm::FOmegaTilde, true));
    unrestricted = std::max(unrestricted, closedness_verdict(model, p, ClosednessForm::OmegaTilde, false));
  }
  out.push_back(at_most("f_omega_tilde_level_closedness[n=3]", restricted, 1e-6));
  out.push_back(at_least("closedness_separation[n=3]", unrestricted / std::max(restricted, 1e-300), 100.0));

  const BallModel homogeneous(n, InertiaTensor::identity(n));
  double half = 0.0;
  for (int k = 0; k < 20; ++k)
    half = std::max(half, std::abs(conformal_factor(homogeneous, sampler.rotation(n)) - 0.5));
  out.push_back(at_most("conformal_factor_homogeneous[n=3]", half, 1e-15));

  const BallModel model(n, sampler.spd_inertia(n));
  double invariance = 0.0, trace = 0.0;
  for (int k = 0; k < 100; ++k) {
    const GroupElement s = sampler.rotation(n);
    const GroupElement h = sampler.stabilizer(n);
    invariance = std::max(invariance, std::abs(conformal_factor(model, h * s) - conformal_factor(model, s)));
    const FrameContext ctx(model, {s, AlgebraElement::zero(n)});
    const Vector n_a = conformal_trace_coefficients(ctx);
    const double f = conformal_factor(model, s);
    for (int a = 0; a < n - 1; ++a)
      trace = std::max(trace, std::abs(-0.5 * f * n_a[a] - conformal_factor_derivative(ctx, a)));
  }
  out.push_back(at_most("conformal_factor_h_invariance[n=3]", invariance, 1e-12));
  out.push_back(at_most("conformal_trace_formula[n=3]", trace, 1e-8));
  return out;
}

// ---------------------------------------------------------------------------
// 9. Ω_nh is not closed

std::vector<Measurement> measure_non_closedness(const VerifyOptions& options) {
  Sampler sampler(stream_seed(options.seed, 9, 3));
  const BallModel model(3, sampler.spd_inertia(3));
  const WitnessResult w =
      non_closedness_witness(model, ClosednessForm::OmegaNH, stream_seed(options.seed, 9, 4));
  return {at_least("omega_nh_non_closedness_witness[n=3]", w.max_residual, 1e-3)};
}

// ---------------------------------------------------------------------------
// 10. The χ-connection and the truncation identity

std::vector<Measurement> measure_chi_connection(const VerifyOptions& options) {
  std::vector<Measurement> out;
  const TwoFormOnTS truncated = compose_forms(FormTag::TruncatedJK);
  const TwoFormOnTS lcurv = compose_forms(FormTag::LCurv);
  const TwoFormOnTS jk = compose_forms(FormTag::JK);
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 10, n));
    double sigma = 0.0, idempotent = 0.0, truncation = 0.0, contraction = 0.0;
    for (int k = 0; k < 100; ++k) {
      const BallModel model(n, sampler.spd_inertia(n));
      const PhasePoint p = sampler.point_in_U_prime(model);
      const FrameContext ctx(model, p);
      const Vector x = solve_xnh(model, p).frame;
      sigma = std::max(sigma, sigma_connection(ctx, x).cwiseAbs().maxCoeff());
      const Matrix chi = chi_matrix(ctx);
      idempotent = std::max(idempotent, (chi * chi - chi).cwiseAbs().maxCoeff());
      const Matrix t = truncated.components(ctx);
      const Matrix l = lcurv.components(ctx);
      if (n == 3) truncation = std::max(truncation, (t - l).cwiseAbs().maxCoeff());
      truncation = std::max(truncation, (x.transpose() * (t - l)).cwiseAbs().maxCoeff());
      contraction = std::max(contraction, (x.transpose() * (jk.components(ctx) - l)).cwiseAbs().maxCoeff());
    }
    out.push_back(at_most(tagged("sigma_of_xnh", n), sigma, 1e-12));
    out.push_back(at_most(tagged("chi_idempotency", n), idempotent, 1e-10));
    out.push_back(at_most(tagged(n == 3 ? "truncated_jk_equals_lcurv" : "truncated_jk_lcurv_xnh_contraction", n),
                          truncation, 1e-10));
    out.push_back(at_most(tagged("jk_lcurv_xnh_contraction", n), contraction, 1e-10));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 11. Relative equilibria

std::vector<Measurement> measure_relative_equilibria(const VerifyOptions& options) {
  std::vector<Measurement> out;
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 11, n));
    const int np = n - 1;
    const int m = so_dim(n);
    const auto vertical_u = [&](const GroupElement& s) {
      Vector space = Vector::Zero(m);
      space.tail(m - np) = sampler.normal_vector(m - np);
      return AlgebraElement::from_coeffs(adjoint_matrix(s).transpose() * space, n);
    };
    double worst = 0.0, start = 0.0;
    const auto run = [&](const BallModel& model, const PhasePoint& p0) {
      start = std::max(start, relative_equilibria_check(model, p0, 0.0).max_g);
      worst = std::max(worst, max_abs_g(model, integrate(model, p0, 10.0, 1e-3)));
    };
    const BallModel diagonal(n, sampler.diagonal_inertia(n));
    run(diagonal, {GroupElement::identity(n), AlgebraElement(diagonal.algebra.basis().Y(1))});
    const GroupElement h = sampler.stabilizer(n);
    run(diagonal, {h, vertical_u(h)});
    const BallModel homogeneous(n, InertiaTensor::identity(n));
    const GroupElement s = sampler.rotation(n);
    run(homogeneous, {s, vertical_u(s)});
    out.push_back(at_most(tagged("equilibria_initial_g", n), start, 1e-12));
    out.push_back(at_most(tagged("equilibria_invariance", n), worst, 1e-8));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 12. Dimension of the reduced space

std::vector<Measurement> measure_reduction_audit(const VerifyOptions& options) {
  std::vector<Measurement> out;
  for (int n : options.ns) {
    Sampler sampler(stream_seed(options.seed, 12, n));
    const BallModel model(n, sampler.spd_inertia(n));
    const int nh = model.algebra.dim_h();
    for (const bool generic : {true, false}) {
      const Vector lambda = generic ? sampler.normal_vector(nh) : Vector::Zero(nh);
      const DimensionAudit a = reduced_dimension_audit(model, lambda, sampler);
      const std::string q = "[n=" + std::to_string(n) + (generic ? ",generic]" : ",zero]");
      out.push_back(at_most("reduced_dimension_mismatch" + q, std::abs(a.predicted - a.measured), 0.0));
      out.push_back(at_most("stabilizer_dimension_mismatch" + q,
                            std::abs(a.stabilizer_dim_predicted - a.stabilizer_dim_measured), 0.0));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites

bool SuiteReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "forms", "truncation", "hamiltonization", "oracle", "all"};
  return names;
}

SuiteReport run_suite(const std::string& suite, const VerifyOptions& options) {
  using Battery = std::function<std::vector<Measurement>(const VerifyOptions&)>;
  static const std::map<std::string, std::vector<Battery>> batteries{
      {"algebra", {measure_algebra}},
      {"forms", {measure_frames}},
      {"truncation", {measure_dynamics_equivalence, measure_momentum_identity, measure_chi_connection}},
      {"hamiltonization",
       {measure_homogeneous_hamiltonicity, measure_hamiltonization, measure_non_closedness,
        measure_reduction_audit}},
      {"oracle", {measure_conservation, measure_oracle_equivalence, measure_relative_equilibria}},
  };
  std::vector<std::string> parts;
  if (suite == "all") {
    parts = {"algebra", "forms", "truncation", "hamiltonization", "oracle"};
  } else if (batteries.count(suite)) {
    parts = {suite};
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  SuiteReport report;
  report.suite = suite;
  for (const auto& part : parts)
    for (const auto& battery : batteries.at(part))
      for (auto& m : battery(options)) {
        const bool ok = within(m.value, m.bound, m.threshold);
        report.checks.push_back({std::move(m), ok});
      }
  return report;
}

}  // namespace chaplygin
