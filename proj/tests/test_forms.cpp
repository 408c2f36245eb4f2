#include "chaplygin/dynamics.hpp"
#include "chaplygin/errors.hpp"
#include "chaplygin/forms.hpp"
#include "chaplygin/sampling.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <array>

using namespace chaplygin;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

AlgebraElement alg(const Matrix& m) { return AlgebraElement(m); }

// Frame field F_d at q, written out from its definition.
TangentVectorTS field(const PhasePoint& q, int d) {
  const int n = q.s.n();
  const int m = so_dim(n);
  if (d < m) {
    const Matrix st = q.s.matrix().transpose();
    return {alg(st * oracle::basis_matrix(n, d) * q.s.matrix()), AlgebraElement::zero(n)};
  }
  return {AlgebraElement::zero(n), alg(oracle::basis_matrix(n, d - m))};
}

PhasePoint flow(const PhasePoint& q, int d, double t) {
  const int n = q.s.n();
  const int m = so_dim(n);
  if (d < m) return {GroupElement(oracle::series_exp(t * oracle::basis_matrix(n, d)) * q.s.matrix()), q.u};
  return {q.s, alg(q.u.matrix() + t * oracle::basis_matrix(n, d - m))};
}

// Killing pairing of Ad(s)a with a basis pair.
double coframe(const GroupElement& s, const AlgebraElement& a, int i, int j) {
  const int n = s.n();
  return oracle::killing(s.matrix() * a.matrix() * s.matrix().transpose(), oracle::A(n, i, j));
}

struct Setup {
  BallModel model;
  PhasePoint p;
};

Setup random_setup(Sampler& rng, int n) {
  BallModel model(n, rng.spd_inertia(n));
  return {std::move(model), rng.phase_point(n)};
}

TangentVectorTS random_vector(Sampler& rng, int n) { return {rng.algebra_element(n), rng.algebra_element(n)}; }

}  // namespace

TEST(Frame, FieldsMatchTheirFlows) {
  Sampler rng(31);
  for (int n = 3; n <= 4; ++n) {
    const BallModel model(n, rng.spd_inertia(n));
    const PhasePoint p = rng.phase_point(n);
    for (int d = 0; d < 2 * model.dim(); ++d) {
      const TangentVectorTS lib = frame_field(model, p, d);
      const TangentVectorTS ref = field(p, d);
      EXPECT_LE(max_abs(lib.a.matrix() - ref.a.matrix()), 1e-14);
      EXPECT_LE(max_abs(lib.b.matrix() - ref.b.matrix()), 1e-14);
      const PhasePoint q = frame_flow(model, p, d, 0.3);
      const PhasePoint r = flow(p, d, 0.3);
      EXPECT_LE(max_abs(q.s.matrix() - r.s.matrix()), 1e-12);
      EXPECT_LE(max_abs(q.u.matrix() - r.u.matrix()), 1e-15);
    }
  }
}

TEST(Frame, CoordinatesRoundTrip) {
  Sampler rng(32);
  for (int n = 3; n <= 5; ++n) {
    const auto [model, p] = random_setup(rng, n);
    const FrameContext ctx(model, p);
    const TangentVectorTS v = random_vector(rng, n);
    const TangentVectorTS w = from_frame_coords(ctx, frame_coords(ctx, v));
    EXPECT_LE(max_abs(w.a.matrix() - v.a.matrix()), 1e-13);
    EXPECT_LE(max_abs(w.b.matrix() - v.b.matrix()), 1e-15);
  }
}

TEST(Frame, BracketMatchesAmbientVectorFields) {
  Sampler rng(33);
  for (int n = 3; n <= 4; ++n) {
    const Algebra algebra(n);
    const int m = algebra.dim();
    const Matrix s = rng.rotation(n).matrix();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Matrix bi = oracle::basis_matrix(n, i), bj = oracle::basis_matrix(n, j);
        const Matrix w = oracle::ambient_bracket([&](const Matrix& x) { return Matrix(bi * x); },
                                                 [&](const Matrix& x) { return Matrix(bj * x); }, s);
        // An ambient vector W s has base frame coordinates coeffs(W).
        const Vector expected = oracle::to_coeffs(w * s.transpose());
        const Vector lib = frame_bracket(algebra, i, j);
        EXPECT_LE(max_abs(lib.head(m) - expected), 1e-9);
        EXPECT_EQ(max_abs(lib.tail(m)), 0.0);
        EXPECT_EQ(max_abs(frame_bracket(algebra, i, m + j)), 0.0);
        EXPECT_EQ(max_abs(frame_bracket(algebra, m + i, m + j)), 0.0);
      }
  }
}

TEST(ThetaS, KnownValues) {
  const BallModel model(3, InertiaTensor::identity(3));
  const PhasePoint p{GroupElement::identity(3), alg(oracle::A(3, 1, 3))};
  EXPECT_NEAR(theta_S(model, p, {alg(oracle::A(3, 1, 3)), AlgebraElement::zero(3)}), 2.0, 1e-15);
  Sampler rng(34);
  EXPECT_EQ(theta_S(model, p, {AlgebraElement::zero(3), rng.algebra_element(3)}), 0.0);
}

TEST(ThetaS, CoefficientExpansionMatchesPairing) {
  Sampler rng(35);
  for (int k = 0; k < 100; ++k) {
    const int n = 3 + k % 2;
    const auto [model, p] = random_setup(rng, n);
    const TangentVectorTS v = random_vector(rng, n);
    EXPECT_NEAR(theta_S(model, p, v), theta_S_pairing(model, p, v), 1e-12);
  }
}

// dθ(F_i, F_j) = F_i θ(F_j) − F_j θ(F_i) − θ([F_i, F_j]) with every piece
// evaluated through the matrix pairing and the test's own flows.
TEST(OmegaS, EqualsMinusDThetaByCartanFormula) {
  Sampler rng(36);
  for (int n = 3; n <= 4; ++n) {
    const auto [model, p] = random_setup(rng, n);
    const int m = model.dim();
    const auto theta = [&](const PhasePoint& q, int d) { return theta_S_pairing(model, q, field(q, d)); };
    for (int i = 0; i < 2 * m; ++i)
      for (int j = 0; j < 2 * m; ++j) {
        double d_theta = oracle::derivative([&](double t) { return theta(flow(p, i, t), j); }) -
                         oracle::derivative([&](double t) { return theta(flow(p, j, t), i); });
        if (i < m && j < m) {
          const Matrix bi = oracle::basis_matrix(n, i), bj = oracle::basis_matrix(n, j);
          const Matrix w = bj * bi - bi * bj;
          const Matrix st = p.s.matrix().transpose();
          d_theta -= theta_S_pairing(model, p, {alg(st * w * p.s.matrix()), AlgebraElement::zero(n)});
        }
        EXPECT_NEAR(d_theta, -omega_S(model, p, field(p, i), field(p, j)), 1e-8) << i << "," << j;
      }
  }
}

TEST(OmegaS, ExteriorDerivativeRoutes) {
  Sampler rng(37);
  const OneFormOnTS theta = theta_S_form();
  const TwoFormOnTS omega = compose_forms(FormTag::OmegaS);
  for (int k = 0; k < 20; ++k) {
    const int n = 3 + k % 2;
    const auto [model, p] = random_setup(rng, n);
    const std::array<TangentVectorTS, 2> pair{random_vector(rng, n), random_vector(rng, n)};
    EXPECT_NEAR(exterior_derivative(model, theta, p, pair), -omega_S(model, p, pair[0], pair[1]), 1e-10);
    const std::array<TangentVectorTS, 3> triple{random_vector(rng, n), random_vector(rng, n),
                                                random_vector(rng, n)};
    EXPECT_LE(std::abs(exterior_derivative(model, omega, p, triple)), 1e-9);
  }
}

TEST(OmegaS, AntisymmetricAndNondegenerate) {
  Sampler rng(38);
  const TwoFormOnTS omega = compose_forms(FormTag::OmegaS);
  for (int k = 0; k < 100; ++k) {
    const int n = 3 + k % 2;
    const auto [model, p] = random_setup(rng, n);
    const TangentVectorTS v = random_vector(rng, n), w = random_vector(rng, n);
    EXPECT_LE(std::abs(omega_S(model, p, v, w) + omega_S(model, p, w, v)), 1e-12);
    EXPECT_GT(std::abs(omega.components(FrameContext(model, p)).determinant()), 1e-10);
  }
}

TEST(Exterior, WrongArityThrows) {
  Sampler rng(39);
  const auto [model, p] = random_setup(rng, 3);
  const std::array<TangentVectorTS, 2> two{random_vector(rng, 3), random_vector(rng, 3)};
  EXPECT_THROW(exterior_derivative(model, compose_forms(FormTag::OmegaS), p, two), std::invalid_argument);
}

TEST(Exterior, StructureEquationForRho) {
  Sampler rng(40);
  for (int n = 3; n <= 4; ++n) {
    const auto [model, p] = random_setup(rng, n);
    const auto pairs = oracle::basis_pairs(n);
    for (int alpha = n - 1; alpha < model.dim(); ++alpha) {
      const Matrix d = exterior_derivative_tensor(model, coframe_form(alpha), p);
      for (int a = 0; a < n - 1; ++a)
        for (int b = 0; b < n - 1; ++b)
          EXPECT_NEAR(d(a, b), oracle::symbolic_bracket(n, pairs[a], pairs[b])[alpha], 1e-10);
    }
  }
}

TEST(Exterior, RegisteredAndFiniteDifferenceAgree) {
  Sampler rng(41);
  ExteriorDerivativeOptions fd;
  fd.mode = DerivativeMode::FiniteDifference;
  for (FormTag tag : {FormTag::OmegaNH, FormTag::OmegaTilde}) {
    const TwoFormOnTS omega = compose_forms(tag);
    for (int n = 3; n <= 4; ++n) {
      const auto [model, p] = random_setup(rng, n);
      const FrameTensor3 a = exterior_derivative_tensor(model, omega, p);
      const FrameTensor3 b = exterior_derivative_tensor(model, omega, p, fd);
      double worst = 0.0;
      for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
          for (int k = 0; k < a.dim(); ++k) worst = std::max(worst, std::abs(a(i, j, k) - b(i, j, k)));
      EXPECT_LE(worst, 1e-8) << to_string(tag) << " n=" << n;
    }
  }
}

TEST(JK, SemiBasicAndVanishesWithoutContactVelocity) {
  Sampler rng(42);
  for (int n = 3; n <= 4; ++n) {
    const auto [model, p] = random_setup(rng, n);
    const TangentVectorTS fiber{AlgebraElement::zero(n), rng.algebra_element(n)};
    EXPECT_EQ(jk_term(model, p, fiber, random_vector(rng, n)), 0.0);
    const PhasePoint internal{p.s, frame_xi(model, p.s, 1) + 0.4 * frame_xi(model, p.s, model.algebra.dim_h())};
    EXPECT_LE(std::abs(jk_term(model, internal, random_vector(rng, n), random_vector(rng, n))), 1e-14);
  }
}

// −Σ g_a c^a_{βb} (ρ^β ∧ η^b)(v1, v2), every factor from matrices.
TEST(JK, MatchesTensorContraction) {
  Sampler rng(43);
  for (int k = 0; k < 20; ++k) {
    const int n = 3 + k % 2;
    const auto [model, p] = random_setup(rng, n);
    const auto pairs = oracle::basis_pairs(n);
    const int np = n - 1;
    const TangentVectorTS v1 = random_vector(rng, n), v2 = random_vector(rng, n);
    const Vector g = oracle::to_coeffs(p.s.matrix() * p.u.matrix() * p.s.matrix().transpose()).head(np);
    double expected = 0.0;
    for (int a = 0; a < np; ++a)
      for (int beta = np; beta < model.dim(); ++beta)
        for (int b = 0; b < np; ++b) {
          const double c = oracle::symbolic_bracket(n, pairs[beta], pairs[b])[a];
          if (c == 0.0) continue;
          const auto [bi, bj] = pairs[beta];
          const auto [zi, zj] = pairs[b];
          const double wedge = coframe(p.s, v1.a, bi, bj) * coframe(p.s, v2.a, zi, zj) -
                               coframe(p.s, v2.a, bi, bj) * coframe(p.s, v1.a, zi, zj);
          expected -= g[a] * c * wedge;
        }
    EXPECT_NEAR(jk_term(model, p, v1, v2), expected, 1e-12);
  }
}

TEST(LCurv, ReadoutForThree) {
  const BallModel model(3, InertiaTensor::identity(3));
  const PhasePoint p{GroupElement::identity(3), alg(oracle::A(3, 1, 2) + oracle::A(3, 1, 3))};
  const TangentVectorTS z1{alg(oracle::A(3, 1, 3)), AlgebraElement::zero(3)};
  const TangentVectorTS z2{alg(oracle::A(3, 2, 3)), AlgebraElement::zero(3)};
  EXPECT_NEAR(lcurv_term(model, p, z1, z2), -1.0, 1e-15);
}

TEST(LCurv, VanishesWithoutInternalVelocityAndIsHInvariant) {
  Sampler rng(44);
  for (int n = 3; n <= 4; ++n) {
    const auto [model, p] = random_setup(rng, n);
    const PhasePoint perp{p.s, frame_zeta(model, p.s, 1) - 0.3 * frame_zeta(model, p.s, n - 1)};
    EXPECT_LE(std::abs(lcurv_term(model, perp, random_vector(rng, n), random_vector(rng, n))), 1e-14);
    const TangentVectorTS v1 = random_vector(rng, n), v2 = random_vector(rng, n);
    const PhasePoint moved{rng.stabilizer(n) * p.s, p.u};
    EXPECT_NEAR(lcurv_term(model, moved, v1, v2), lcurv_term(model, p, v1, v2), 1e-12);
    EXPECT_NEAR(jk_term(model, moved, v1, v2), jk_term(model, p, v1, v2), 1e-12);
  }
}

TEST(Compose, OmegaNHDiffersFromOmegaSOnlyOnBasePairs) {
  Sampler rng(45);
  const TwoFormOnTS nh = compose_forms(FormTag::OmegaNH);
  const TwoFormOnTS s = compose_forms(FormTag::OmegaS);
  for (int n = 3; n <= 4; ++n) {
    const auto [model, p] = random_setup(rng, n);
    const FrameContext ctx(model, p);
    const Matrix diff = nh.components(ctx) - s.components(ctx);
    const int m = model.dim();
    EXPECT_EQ(max_abs(diff.rightCols(m)), 0.0);
    EXPECT_EQ(max_abs(diff.bottomRows(m)), 0.0);
  }
}

TEST(Compose, ScaledNeedsFactor) { EXPECT_THROW(compose_forms(FormTag::Scaled), std::invalid_argument); }

TEST(Chi, IdempotentAndThrowsNearEquilibria) {
  Sampler rng(46);
  for (int n = 3; n <= 4; ++n) {
    const BallModel model(n, rng.spd_inertia(n));
    const PhasePoint p = rng.point_in_U_prime(model);
    const TangentVectorTS v = random_vector(rng, n);
    const TangentVectorTS once = chi_projection(model, p, v);
    const TangentVectorTS twice = chi_projection(model, p, once);
    EXPECT_LE(max_abs(once.a.matrix() - twice.a.matrix()), 1e-10);
    EXPECT_LE(max_abs(once.b.matrix() - twice.b.matrix()), 1e-10);
  }
  const BallModel model(3, InertiaTensor::identity(3));
  const PhasePoint eq{GroupElement::identity(3), alg(oracle::A(3, 1, 2))};
  EXPECT_THROW(chi_projection(model, eq, random_vector(rng, 3)), NearEquilibriumError);
}

TEST(Chi, AnnihilatesTheNonholonomicField) {
  Sampler rng(47);
  for (int k = 0; k < 50; ++k) {
    const int n = 3 + k % 2;
    const BallModel model(n, rng.spd_inertia(n));
    const PhasePoint p = rng.point_in_U_prime(model);
    const FrameContext ctx(model, p);
    EXPECT_LE(max_abs(sigma_connection(ctx, solve_xnh(model, p).frame)), 1e-12);
  }
}

TEST(Chi, TruncationReproducesCurvatureTermForThree) {
  Sampler rng(48);
  const TwoFormOnTS truncated = compose_forms(FormTag::TruncatedJK);
  const TwoFormOnTS lcurv = compose_forms(FormTag::LCurv);
  for (int k = 0; k < 100; ++k) {
    const BallModel model(3, rng.spd_inertia(3));
    const FrameContext ctx(model, rng.point_in_U_prime(model));
    EXPECT_LE(max_abs(truncated.components(ctx) - lcurv.components(ctx)), 1e-10);
  }
}
