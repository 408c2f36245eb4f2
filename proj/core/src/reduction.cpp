#include "chaplygin/reduction.hpp"

#include <cmath>
#include <stdexcept>

namespace chaplygin {
namespace {

constexpr double kRankCutoff = 1e-10;

int numerical_rank(const Matrix& a) {
  if (a.size() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double tol = kRankCutoff * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) r += sv[i] > tol;
  return r;
}

// Orthonormal basis of ker a (columns).
Matrix kernel_basis(const Matrix& a, int* rank_out = nullptr) {
  const Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double tol = kRankCutoff * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) r += sv[i] > tol;
  if (rank_out) *rank_out = r;
  return svd.matrixV().rightCols(a.cols() - r);
}

}  // namespace

PhasePoint h_action(const GroupElement& h, const PhasePoint& p) {
  const int n = h.n();
  const Vector en = Vector::Unit(n, n - 1);
  const double off = (h.matrix() * en - en).cwiseAbs().maxCoeff();
  if (off > 1e-12)
    throw std::invalid_argument("h_action: element does not fix e_n (defect " + std::to_string(off) + ")");
  return {h * p.s, p.u};
}

Vector orbit_invariants(const BallModel& model, const AlgebraElement& level) {
  const int k = model.n() - 1;
  const Matrix block = level.matrix().topLeftCorner(k, k);
  return Eigen::JacobiSVD<Matrix>(block).singularValues();
}

ReducedSample project_reduced(const BallModel& model, const PhasePoint& p) {
  const int n = model.n();
  ReducedSample out;
  out.gamma = p.s.matrix().transpose().col(n - 1);
  out.u = p.u;
  out.level = momentum_JH(model, p);
  out.orbit_invariants = orbit_invariants(model, out.level);
  return out;
}

LevelSetFrame level_set_frame(const BallModel& model, const PhasePoint& p) {
  const FrameContext ctx(model, p);
  LevelSetFrame out;
  out.basis = kernel_basis(dJH_frame(ctx), &out.rank);
  if (out.rank < model.algebra.dim_h())
    throw std::runtime_error("level_set_frame: dJ_H rank " + std::to_string(out.rank) +
                             " below dim h = " + std::to_string(model.algebra.dim_h()));
  for (int c = 0; c < out.basis.cols(); ++c) out.vectors.push_back(from_frame_coords(ctx, out.basis.col(c)));
  return out;
}

const char* to_string(ClosednessForm form) {
  switch (form) {
    case ClosednessForm::OmegaNH: return "omega_nh";
    case ClosednessForm::OmegaTilde: return "omega_tilde";
    case ClosednessForm::FOmegaTilde: return "f_omega_tilde";
  }
  return "unknown";
}

TwoFormOnTS closedness_form(ClosednessForm form) {
  switch (form) {
    case ClosednessForm::OmegaNH: return compose_forms(FormTag::OmegaNH);
    case ClosednessForm::OmegaTilde: return compose_forms(FormTag::OmegaTilde);
    case ClosednessForm::FOmegaTilde: return compose_forms(FormTag::Scaled, conformal_factor_field());
  }
  throw std::invalid_argument("closedness_form: unknown form");
}

double closedness_verdict(const BallModel& model, const PhasePoint& p, ClosednessForm form,
                          bool restrict, const ExteriorDerivativeOptions& options) {
  const FrameTensor3 d = exterior_derivative_tensor(model, closedness_form(form), p, options);
  const int dim = d.dim();
  Matrix vectors = Matrix::Identity(dim, dim);
  if (restrict) vectors = level_set_frame(model, p).basis;
  const int k = static_cast<int>(vectors.cols());
  double worst = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      for (int c = b + 1; c < k; ++c)
        worst = std::max(worst, std::abs(d.contract(vectors.col(a), vectors.col(b), vectors.col(c))));
  return worst;
}

WitnessResult non_closedness_witness(const BallModel& model, ClosednessForm form, std::uint64_t seed,
                                     long samples, int points, double threshold) {
  Sampler sampler(seed);
  const TwoFormOnTS omega = closedness_form(form);
  const int dim = 2 * model.dim();
  const long per_point = std::max<long>(1, samples / std::max(1, points));
  WitnessResult out;
  while (out.samples < samples) {
    const PhasePoint p = sampler.phase_point(model.n());
    const FrameTensor3 d = exterior_derivative_tensor(model, omega, p);
    for (long k = 0; k < per_point && out.samples < samples; ++k) {
      const double r = std::abs(
          d.contract(sampler.unit_vector(dim), sampler.unit_vector(dim), sampler.unit_vector(dim)));
      if (r > threshold && !out.found) {
        out.found = true;
        out.first_hit = out.samples;
      }
      out.max_residual = std::max(out.max_residual, r);
      ++out.samples;
    }
  }
  return out;
}

PhasePoint sample_level_point(const BallModel& model, const Vector& lambda, Sampler& sampler) {
  const Algebra& alg = model.algebra;
  if (lambda.size() != alg.dim_h())
    throw std::invalid_argument("sample_level_point: lambda must have dim h entries");
  PhasePoint p = sampler.phase_point(model.n());
  const FrameContext ctx(model, p);
  Vector target = ctx.mt;
  target.tail(alg.dim_h()) = lambda;
  // mt = R𝕀u, so shifting 𝕀u by Rᵀ(target − mt) lands exactly on the level.
  const Vector u = ctx.u + model.inertia.inverse() * (ctx.R.transpose() * (target - ctx.mt));
  p.u = AlgebraElement::from_coeffs(u, model.n());
  return p;
}

DimensionAudit reduced_dimension_audit(const BallModel& model, const Vector& lambda, Sampler& sampler) {
  const Algebra& alg = model.algebra;
  const int m = alg.dim();
  const int np = alg.dim_perp();
  const int nh = alg.dim_h();
  DimensionAudit audit;
  audit.n = model.n();

  // Prediction from the adjoint action of λ on h.
  Matrix ad_lambda = Matrix::Zero(nh, nh);
  for (int alpha = 0; alpha < nh; ++alpha)
    ad_lambda += lambda[alpha] * alg.ad(np + alpha).bottomRightCorner(nh, nh);
  audit.stabilizer_dim_predicted = nh - numerical_rank(ad_lambda);
  audit.predicted = 2 * (model.n() - 1) + nh - audit.stabilizer_dim_predicted;

  // Measurement at a sampled point of the level set.
  const PhasePoint p = sample_level_point(model, lambda, sampler);
  const FrameContext ctx(model, p);
  const Matrix djh = dJH_frame(ctx);
  audit.level_set_dim = 2 * m - numerical_rank(djh);

  Matrix generators(2 * m, nh);
  for (int alpha = 1; alpha <= nh; ++alpha) {
    const TangentVectorTS v{frame_xi(model, p.s, alpha), AlgebraElement::zero(model.n())};
    generators.col(alpha - 1) = frame_coords(ctx, v);
  }
  const Matrix stabilizer = kernel_basis(djh * generators);
  audit.stabilizer_dim_measured = static_cast<int>(stabilizer.cols());
  audit.orbit_dim = numerical_rank(generators * stabilizer);
  audit.measured = audit.level_set_dim - audit.orbit_dim;
  return audit;
}

}  // namespace chaplygin
