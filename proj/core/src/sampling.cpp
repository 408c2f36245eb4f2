#include "chaplygin/sampling.hpp"

#include <stdexcept>

namespace chaplygin {

Vector Sampler::normal_vector(int k) {
  Vector v(k);
  for (int i = 0; i < k; ++i) v[i] = normal();
  return v;
}

Vector Sampler::unit_vector(int k) {
  Vector v = normal_vector(k);
  while (v.norm() < 1e-12) v = normal_vector(k);
  return v / v.norm();
}

AlgebraElement Sampler::algebra_element(int n, double scale) {
  return AlgebraElement::from_coeffs(scale * normal_vector(so_dim(n)), n);
}

GroupElement Sampler::rotation(int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal();
  const Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return GroupElement(q);
}

GroupElement Sampler::stabilizer(int n) { return embed_stabilizer(rotation(n - 1).matrix()); }

PhasePoint Sampler::phase_point(int n, double u_scale) {
  return {rotation(n), algebra_element(n, u_scale)};
}

InertiaTensor Sampler::spd_inertia(int n, double lo, double hi) {
  const int m = so_dim(n);
  Vector eig(m);
  for (int i = 0; i < m; ++i) eig[i] = uniform(lo, hi);
  const Matrix q = rotation(m).matrix();
  Matrix i = q * eig.asDiagonal() * q.transpose();
  i = 0.5 * (i + i.transpose());
  return InertiaTensor(i);
}

InertiaTensor Sampler::diagonal_inertia(int n, double lo, double hi) {
  const int m = so_dim(n);
  Vector d(m);
  for (int i = 0; i < m; ++i) d[i] = uniform(lo, hi);
  return InertiaTensor::diagonal(d);
}

PhasePoint Sampler::point_in_U_prime(const BallModel& model, double min_g) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    PhasePoint p = phase_point(model.n());
    const FrameContext ctx(model, p);
    if (ctx.ut.head(model.algebra.dim_perp()).cwiseAbs().minCoeff() >= min_g) return p;
  }
  throw std::runtime_error("point_in_U_prime: rejection sampling failed");
}

}  // namespace chaplygin
