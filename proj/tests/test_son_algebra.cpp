#include "chaplygin/sampling.hpp"
#include "chaplygin/son_algebra.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace chaplygin;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

AlgebraElement element(int n, int index) { return AlgebraElement(oracle::basis_matrix(n, index)); }

}  // namespace

TEST(AdaptedBasis, MatchesIndexPairsForThree) {
  const AdaptedBasis b = adapted_basis(3);
  ASSERT_EQ(b.dim(), 3);
  EXPECT_EQ(b.Z(1), oracle::A(3, 1, 3));
  EXPECT_EQ(b.Z(2), oracle::A(3, 2, 3));
  EXPECT_EQ(b.Y(1), oracle::A(3, 1, 2));
}

TEST(AdaptedBasis, ActionOnLastAxis) {
  const AdaptedBasis b = adapted_basis(3);
  const Vector e3 = Vector::Unit(3, 2);
  EXPECT_EQ(b.Y(1) * e3, Vector::Zero(3));
  EXPECT_EQ(b.Z(1) * e3, Vector::Unit(3, 0));
}

TEST(AdaptedBasis, BlockDimensions) {
  for (int n = 3; n <= 6; ++n) {
    const AdaptedBasis b = adapted_basis(n);
    EXPECT_EQ(b.dim(), n * (n - 1) / 2);
    EXPECT_EQ(b.dim_perp(), n - 1);
    EXPECT_EQ(b.dim_h(), (n - 1) * (n - 2) / 2);
  }
}

TEST(AdaptedBasis, OrthonormalAndSupportedOnTheRightBlocks) {
  for (int n = 3; n <= 6; ++n) {
    const AdaptedBasis b = adapted_basis(n);
    const Vector en = Vector::Unit(n, n - 1);
    for (int i = 0; i < b.dim(); ++i) {
      for (int j = 0; j < b.dim(); ++j)
        EXPECT_NEAR(oracle::killing(b.elements[i], b.elements[j]), i == j ? 1.0 : 0.0, 1e-13);
      if (b.is_perp(i)) {
        EXPECT_EQ(max_abs(b.elements[i].topLeftCorner(n - 1, n - 1)), 0.0);
      } else {
        EXPECT_EQ(max_abs(b.elements[i] * en), 0.0);
      }
    }
  }
}

TEST(Bracket, KnownValuesForThree) {
  const AdaptedBasis b = adapted_basis(3);
  const AlgebraElement z1(b.Z(1)), z2(b.Z(2)), y3(b.Y(1));
  EXPECT_EQ(bracket(z1, z2).matrix(), -y3.matrix());
  EXPECT_EQ(bracket(y3, z1).matrix(), -z2.matrix());
  EXPECT_EQ(max_abs(bracket(z1, z1).matrix()), 0.0);
}

TEST(Bracket, MatchesIndexRelationOnAllBasisPairs) {
  for (int n = 3; n <= 5; ++n) {
    const auto pairs = oracle::basis_pairs(n);
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
      for (int j = 0; j < static_cast<int>(pairs.size()); ++j) {
        const Vector expected = oracle::symbolic_bracket(n, pairs[i], pairs[j]);
        EXPECT_LE(max_abs(bracket(element(n, i), element(n, j)).coeffs() - expected), 1e-15);
      }
  }
}

TEST(Bracket, DimensionMismatchThrows) {
  EXPECT_THROW(bracket(AlgebraElement::zero(3), AlgebraElement::zero(4)), std::invalid_argument);
}

TEST(KillingForm, Values) {
  const AdaptedBasis b = adapted_basis(3);
  EXPECT_DOUBLE_EQ(killing_ip(b.Z(1), b.Z(1)), 1.0);
  EXPECT_DOUBLE_EQ(killing_ip(b.Z(1), b.Y(1)), 0.0);
}

TEST(KillingForm, AdInvariant) {
  Sampler rng(1);
  for (int k = 0; k < 50; ++k) {
    const int n = 3 + k % 3;
    const GroupElement s = rng.rotation(n);
    const AlgebraElement x = rng.algebra_element(n), y = rng.algebra_element(n);
    EXPECT_NEAR(killing_ip(ad_action(s, x), ad_action(s, y)), killing_ip(x, y), 1e-12);
  }
}

TEST(StructureConstants, MatchIndexRelation) {
  for (int n = 3; n <= 5; ++n) {
    const StructureTensor c = structure_constants(adapted_basis(n));
    const auto pairs = oracle::basis_pairs(n);
    for (int i = 0; i < c.dim(); ++i)
      for (int j = 0; j < c.dim(); ++j) {
        const Vector expected = oracle::symbolic_bracket(n, pairs[i], pairs[j]);
        for (int k = 0; k < c.dim(); ++k) EXPECT_EQ(c(k, i, j), expected[k]);
      }
  }
}

TEST(StructureConstants, ZOneZTwoGivesMinusY) {
  const StructureTensor c = structure_constants(adapted_basis(3));
  EXPECT_EQ(c(2, 0, 1), -1.0);
}

TEST(StructureConstants, HBlockClosesAndJacobiHolds) {
  for (int n = 3; n <= 5; ++n) {
    const StructureTensor c = structure_constants(adapted_basis(n));
    const int np = n - 1;
    for (int a = 0; a < np; ++a)
      for (int beta = np; beta < c.dim(); ++beta)
        for (int gamma = np; gamma < c.dim(); ++gamma) EXPECT_EQ(c(a, beta, gamma), 0.0);
    EXPECT_LE(c.jacobi_residual(), 1e-12);
    EXPECT_LE(c.antisymmetry_residual(), 0.0);
  }
}

TEST(StructureConstants, CorruptedTensorFailsJacobi) {
  StructureTensor c = structure_constants(adapted_basis(4));
  c(3, 0, 1) += 0.25;
  c(3, 1, 0) -= 0.25;
  EXPECT_GT(c.jacobi_residual(), 1e-3);
}

TEST(StructureConstants, BracketFromTensorMatchesMatrices) {
  Sampler rng(2);
  const Algebra alg(4);
  for (int k = 0; k < 20; ++k) {
    const AlgebraElement x = rng.algebra_element(4), y = rng.algebra_element(4);
    const Vector expected = oracle::to_coeffs(x.matrix() * y.matrix() - y.matrix() * x.matrix());
    EXPECT_LE(max_abs(alg.structure().bracket(x.coeffs(), y.coeffs()) - expected), 1e-13);
  }
}

TEST(AdAction, IdentityAndOwnGroup) {
  Sampler rng(3);
  const AlgebraElement x = rng.algebra_element(3);
  EXPECT_EQ(ad_action(GroupElement::identity(3), x).matrix(), x.matrix());
  const AlgebraElement y3(adapted_basis(3).Y(1));
  EXPECT_LE(max_abs(ad_action(group_exp(0.7 * y3), y3).matrix() - y3.matrix()), 1e-15);
}

TEST(AdAction, HomomorphismAndCoefficientMatrix) {
  Sampler rng(4);
  for (int k = 0; k < 30; ++k) {
    const int n = 3 + k % 3;
    const GroupElement s1 = rng.rotation(n), s2 = rng.rotation(n);
    const AlgebraElement x = rng.algebra_element(n);
    EXPECT_LE(max_abs(ad_action(s1 * s2, x).matrix() - ad_action(s1, ad_action(s2, x)).matrix()), 1e-12);
    const Matrix conj = s1.matrix() * x.matrix() * s1.matrix().transpose();
    EXPECT_LE(max_abs(adjoint_matrix(s1) * x.coeffs() - oracle::to_coeffs(conj)), 1e-12);
  }
}

TEST(GroupExp, ZeroIsIdentity) {
  for (int n = 3; n <= 5; ++n) EXPECT_EQ(group_exp(AlgebraElement::zero(n)).matrix(), Matrix::Identity(n, n));
}

TEST(GroupExp, QuarterTurnSendsE2ToE1) {
  const AlgebraElement y3(adapted_basis(3).Y(1));
  const Matrix r = group_exp(std::numbers::pi / 2 * y3).matrix();
  const Matrix ref = oracle::series_exp(std::numbers::pi / 2 * y3.matrix());
  EXPECT_LE(max_abs(r - ref), 1e-12);
  EXPECT_LE(max_abs(r * Vector::Unit(3, 1) - Vector::Unit(3, 0)), 1e-15);
}

TEST(GroupExp, MatchesLongDoubleSeries) {
  Sampler rng(5);
  for (int k = 0; k < 60; ++k) {
    const int n = 3 + k % 4;
    const AlgebraElement x = rng.algebra_element(n, 2.0);
    const Matrix ref = oracle::series_exp(x.matrix());
    EXPECT_LE(max_abs(group_exp(x).matrix() - ref), 1e-12);
    EXPECT_LE(max_abs(group_exp_series(x).matrix() - ref), 1e-12);
  }
}

TEST(GroupExp, OrthogonalWithInverse) {
  Sampler rng(6);
  for (int k = 0; k < 20; ++k) {
    const AlgebraElement x = rng.algebra_element(4, 3.0);
    const GroupElement g = group_exp(x);
    EXPECT_LE(g.orthogonality_defect(), 1e-12);
    EXPECT_NEAR(g.matrix().determinant(), 1.0, 1e-12);
    EXPECT_LE(max_abs((g * group_exp(-x)).matrix() - Matrix::Identity(4, 4)), 1e-12);
  }
}

TEST(Coefficients, RoundTripIsExact) {
  Sampler rng(7);
  for (int n = 3; n <= 6; ++n) {
    const Vector c = rng.normal_vector(so_dim(n));
    EXPECT_LE(max_abs(AlgebraElement::from_coeffs(c, n).coeffs() - c), 1e-14);
    EXPECT_LE(max_abs(AlgebraElement::from_coeffs(c, n).matrix() - oracle::from_coeffs(n, c)), 0.0);
  }
}

TEST(Elements, RejectInvalidMatrices) {
  Matrix m = Matrix::Identity(3, 3);
  EXPECT_THROW(AlgebraElement{m}, std::invalid_argument);
  m(0, 0) = -1.0;
  EXPECT_THROW(GroupElement{m}, std::invalid_argument);
  EXPECT_THROW(GroupElement{2.0 * Matrix::Identity(3, 3)}, std::invalid_argument);
}

TEST(Elements, NearestRotationRepairsDrift) {
  Sampler rng(8);
  const GroupElement s = rng.rotation(4);
  Matrix drifted = s.matrix();
  drifted(0, 1) += 1e-9;
  const GroupElement fixed = nearest_rotation(drifted);
  EXPECT_LE(fixed.orthogonality_defect(), 1e-15);
  EXPECT_LE(max_abs(fixed.matrix() - s.matrix()), 1e-8);
}
