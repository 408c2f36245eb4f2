#include "chaplygin/ball_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chaplygin {

InertiaTensor::InertiaTensor(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 3)
    throw std::invalid_argument("InertiaTensor: expected a square matrix of size n(n-1)/2");
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-13 * scale)
    throw std::invalid_argument("InertiaTensor: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix_);
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("InertiaTensor: matrix is not positive definite (min eigenvalue " +
                                std::to_string(eig.eigenvalues().minCoeff()) + ")");
  inverse_ = matrix_.inverse();
  homogeneous_ = matrix_.isIdentity(0.0);
}

InertiaTensor InertiaTensor::identity(int n) {
  return InertiaTensor(Matrix::Identity(so_dim(n), so_dim(n)));
}

InertiaTensor InertiaTensor::diagonal(const Vector& diag) { return InertiaTensor(diag.asDiagonal()); }

InertiaTensor InertiaTensor::principal3(double i1, double i2, double i3) {
  Vector d(3);
  d << i2, i1, i3;  // (Z_1, Z_2, Y_3)
  return diagonal(d);
}

BallModel::BallModel(int n, InertiaTensor inertia_tensor)
    : algebra(n), inertia(std::move(inertia_tensor)) {
  if (inertia.dim() != algebra.dim())
    throw std::invalid_argument("BallModel: inertia has size " + std::to_string(inertia.dim()) +
                                ", expected " + std::to_string(algebra.dim()));
}

FrameContext::FrameContext(const BallModel& m, const PhasePoint& p)
    : model(&m), point(p), R(adjoint_matrix(p.s)), u(p.u.coeffs()) {
  if (p.s.n() != m.n() || p.u.n() != m.n())
    throw std::invalid_argument("FrameContext: phase point dimension does not match model");
  ut = R * u;
  mt = R * (m.inertia.matrix() * u);
}

ContextTangent context_derivative(const FrameContext& ctx, int direction) {
  const int m = ctx.model->dim();
  if (direction < 0 || direction >= 2 * m)
    throw std::out_of_range("context_derivative: direction out of range");
  ContextTangent t;
  if (direction < m) {
    const Matrix& ad = ctx.model->algebra.ad(direction);
    t.dR = ad * ctx.R;
    t.dut = ad * ctx.ut;
    t.dmt = ad * ctx.mt;
  } else {
    const int j = direction - m;
    t.dR = Matrix::Zero(m, m);
    t.dut = ctx.R.col(j);
    t.dmt = ctx.R * ctx.model->inertia.matrix().col(j);
  }
  return t;
}

Vector connection_A(const BallModel& model, const PhasePoint& p) {
  const FrameContext ctx(model, p);
  return -ctx.ut.head(model.algebra.dim_perp());
}

Vector connection_A_contact(const PhasePoint& p) {
  const int n = p.s.n();
  const Matrix space = p.s.matrix() * p.u.matrix() * p.s.matrix().transpose();
  const Vector contact = space.col(n - 1);  // ũ.e_n
  return -contact.head(n - 1);
}

CoframeSample coframe_coeffs(const BallModel& model, const PhasePoint& p) {
  const FrameContext ctx(model, p);
  const int np = model.algebra.dim_perp();
  const int nh = model.algebra.dim_h();
  return {ctx.ut.tail(nh), ctx.ut.head(np), ctx.mt.tail(nh), ctx.mt.head(np)};
}

double compressed_hamiltonian(const BallModel& model, const PhasePoint& p) {
  const FrameContext ctx(model, p);
  const Vector g = ctx.ut.head(model.algebra.dim_perp());
  return 0.5 * ctx.u.dot(model.inertia.matrix() * ctx.u) + 0.5 * g.squaredNorm();
}

AlgebraElement momentum_JH(const BallModel& model, const PhasePoint& p) {
  const FrameContext ctx(model, p);
  Vector c = Vector::Zero(model.dim());
  const int nh = model.algebra.dim_h();
  c.tail(nh) = ctx.mt.tail(nh);
  return AlgebraElement::from_coeffs(c, model.n());
}

AlgebraElement frame_xi(const BallModel& model, const GroupElement& s, int alpha) {
  const AlgebraElement y(model.algebra.basis().Y(alpha));
  return ad_action(s.inverse(), y);
}

AlgebraElement frame_zeta(const BallModel& model, const GroupElement& s, int a) {
  const AlgebraElement z(model.algebra.basis().Z(a));
  return ad_action(s.inverse(), z);
}

Matrix metric_phi(const BallModel& model, const GroupElement& s) {
  const Matrix r = adjoint_matrix(s);
  return model.inertia.matrix() + r.transpose() * model.algebra.perp_projector() * r;
}

AlgebraElement apply_metric_phi(const BallModel& model, const GroupElement& s,
                                const AlgebraElement& u) {
  const int n = model.n();
  AlgebraElement out =
      AlgebraElement::from_coeffs(model.inertia.matrix() * u.coeffs(), n);
  const AlgebraElement ut = ad_action(s, u);
  for (int a = 1; a < n; ++a) {
    const AlgebraElement z(model.algebra.basis().Z(a));
    out = out + killing_ip(ut, z) * frame_zeta(model, s, a);
  }
  return out;
}

double conformal_factor(const BallModel& model, const GroupElement& s) {
  const Matrix phi = metric_phi(model, s);
  const double det = Matrix(phi.llt().matrixL()).diagonal().prod();
  return 1.0 / det;  // det Φ = (det L)², so det^{-1/2} = 1 / det L
}

double conformal_factor_derivative(const FrameContext& ctx, int direction) {
  const int m = ctx.model->dim();
  if (direction >= m) return 0.0;
  const Matrix& P = ctx.model->algebra.perp_projector();
  const Matrix phi = ctx.model->inertia.matrix() + ctx.R.transpose() * P * ctx.R;
  const Matrix dR = ctx.model->algebra.ad(direction) * ctx.R;
  const Matrix dphi = dR.transpose() * P * ctx.R + ctx.R.transpose() * P * dR;
  const Eigen::LLT<Matrix> llt(phi);
  const double f = 1.0 / Matrix(llt.matrixL()).diagonal().prod();
  return -0.5 * f * llt.solve(dphi).trace();
}

Vector conformal_trace_coefficients(const FrameContext& ctx) {
  // N_a = −2 Σ c^α_{ab} ⟨Φ⁻¹ ξ_α(s), ζ_b(s)⟩, with ξ, ζ in body coefficients
  // given by the columns of Rᵀ.
  const Algebra& alg = ctx.model->algebra;
  const int np = alg.dim_perp();
  const int m = alg.dim();
  const Matrix phi = metric_phi(*ctx.model, ctx.point.s);
  const Matrix gram = ctx.R * phi.llt().solve(ctx.R.transpose());
  Vector n_a = Vector::Zero(np);
  for (int a = 0; a < np; ++a)
    for (int alpha = np; alpha < m; ++alpha)
      for (int b = 0; b < np; ++b)
        n_a[a] += -2.0 * alg.structure()(alpha, a, b) * gram(alpha, b);
  return n_a;
}

GroupElement embed_stabilizer(const Matrix& h) {
  const int k = static_cast<int>(h.rows());
  Matrix g = Matrix::Identity(k + 1, k + 1);
  g.topLeftCorner(k, k) = h;
  return GroupElement(g);
}

}  // namespace chaplygin
