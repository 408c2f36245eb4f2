#include "chaplygin/forms.hpp"

#include "chaplygin/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chaplygin {
namespace {

// θ^S base components p = mt + P ut; linear in (ut, mt).
Vector theta_base(const Algebra& alg, const Vector& ut, const Vector& mt) {
  return mt + alg.perp_projector() * ut;
}

// Base-base block of Ω^S = −dθ^S, linear in (ut, mt):
//   A_ij = −(D_i p_j − D_j p_i + Σ_k C^k_{ij} p_k),  D_i p = ad_i mt + P ad_i ut.
Matrix omega_s_base_block(const Algebra& alg, const Vector& ut, const Vector& mt) {
  const int m = alg.dim();
  const Matrix& P = alg.perp_projector();
  const Vector p = theta_base(alg, ut, mt);
  Matrix dp(m, m);  // dp(j, i) = D_i p_j
  for (int i = 0; i < m; ++i) dp.col(i) = alg.ad(i) * mt + P * (alg.ad(i) * ut);
  Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double cp = 0.0;
      for (int k = 0; k < m; ++k) cp += alg.structure()(k, i, j) * p[k];
      a(i, j) = -(dp(j, i) - dp(i, j) + cp);
    }
  return a;
}

// Base-fiber block Ω^S(Ê_i, V_j) = D_{V_j} p_i = (R 𝕀 + P R)_{ij}; linear in R.
Matrix omega_s_mixed_block(const BallModel& model, const Matrix& R) {
  return R * model.inertia.matrix() + model.algebra.perp_projector() * R;
}

Matrix assemble(const Matrix& base, const Matrix& mixed) {
  const int m = static_cast<int>(base.rows());
  Matrix w = Matrix::Zero(2 * m, 2 * m);
  w.topLeftCorner(m, m) = base;
  w.topRightCorner(m, m) = mixed;
  w.bottomLeftCorner(m, m) = -mixed.transpose();
  return w;
}

// ⟨J,K⟩ = −Σ g_a dη^a: base components −Σ_{a∈h⊥} ut_a C^a_{ij}.
Matrix jk_base_block(const Algebra& alg, const Vector& ut) {
  const int m = alg.dim();
  Matrix w = Matrix::Zero(m, m);
  for (int a = 0; a < alg.dim_perp(); ++a) {
    if (ut[a] == 0.0) continue;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) w(i, j) -= ut[a] * alg.structure()(a, i, j);
  }
  return w;
}

// ⟨L,Curv^ω⟩ = Σ_{b<c} l_α c^α_{bc} η^b∧η^c: nonzero only on h⊥ × h⊥.
Matrix lcurv_base_block(const Algebra& alg, const Vector& ut) {
  const int m = alg.dim();
  const int np = alg.dim_perp();
  Matrix w = Matrix::Zero(m, m);
  for (int alpha = np; alpha < m; ++alpha) {
    if (ut[alpha] == 0.0) continue;
    for (int b = 0; b < np; ++b)
      for (int c = 0; c < np; ++c) w(b, c) += ut[alpha] * alg.structure()(alpha, b, c);
  }
  return w;
}

Matrix embed_base(const Matrix& base) {
  const int m = static_cast<int>(base.rows());
  Matrix w = Matrix::Zero(2 * m, 2 * m);
  w.topLeftCorner(m, m) = base;
  return w;
}

Matrix omega_s_components(const FrameContext& ctx) {
  return assemble(omega_s_base_block(ctx.model->algebra, ctx.ut, ctx.mt),
                  omega_s_mixed_block(*ctx.model, ctx.R));
}

Matrix omega_s_derivative(const FrameContext& ctx, int d) {
  const ContextTangent t = context_derivative(ctx, d);
  return assemble(omega_s_base_block(ctx.model->algebra, t.dut, t.dmt),
                  omega_s_mixed_block(*ctx.model, t.dR));
}

Matrix jk_components(const FrameContext& ctx) {
  return embed_base(jk_base_block(ctx.model->algebra, ctx.ut));
}

Matrix jk_derivative(const FrameContext& ctx, int d) {
  return embed_base(jk_base_block(ctx.model->algebra, context_derivative(ctx, d).dut));
}

Matrix lcurv_components(const FrameContext& ctx) {
  return embed_base(lcurv_base_block(ctx.model->algebra, ctx.ut));
}

Matrix lcurv_derivative(const FrameContext& ctx, int d) {
  return embed_base(lcurv_base_block(ctx.model->algebra, context_derivative(ctx, d).dut));
}

// Extended structure constants: zero whenever an index is a fiber index.
double bracket_coeff(const Algebra& alg, int l, int i, int j) {
  const int m = alg.dim();
  if (l >= m || i >= m || j >= m) return 0.0;
  return alg.structure()(l, i, j);
}

template <typename Value, typename Eval>
Value central_difference(const BallModel& model, const PhasePoint& p, int direction, double h,
                         Eval&& eval) {
  const auto at = [&](double t) { return eval(FrameContext(model, frame_flow(model, p, direction, t))); };
  return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

}  // namespace

// ---------------------------------------------------------------------------
// Frame

Vector frame_coords(const FrameContext& ctx, const TangentVectorTS& v) {
  const int m = ctx.model->dim();
  Vector c(2 * m);
  c.head(m) = ctx.R * v.a.coeffs();
  c.tail(m) = v.b.coeffs();
  return c;
}

TangentVectorTS from_frame_coords(const FrameContext& ctx, const Vector& coords) {
  const int m = ctx.model->dim();
  const int n = ctx.model->n();
  if (coords.size() != 2 * m) throw std::invalid_argument("from_frame_coords: expected 2m coordinates");
  return {AlgebraElement::from_coeffs(ctx.R.transpose() * coords.head(m), n),
          AlgebraElement::from_coeffs(coords.tail(m), n)};
}

TangentVectorTS frame_field(const BallModel& model, const PhasePoint& p, int direction) {
  const int m = model.dim();
  const int n = model.n();
  if (direction < 0 || direction >= 2 * m) throw std::out_of_range("frame_field: bad direction");
  if (direction < m) {
    const AlgebraElement b(model.algebra.basis().elements[direction]);
    return {ad_action(p.s.inverse(), b), AlgebraElement::zero(n)};
  }
  return {AlgebraElement::zero(n), AlgebraElement(model.algebra.basis().elements[direction - m])};
}

PhasePoint frame_flow(const BallModel& model, const PhasePoint& p, int direction, double t) {
  const int m = model.dim();
  if (direction < 0 || direction >= 2 * m) throw std::out_of_range("frame_flow: bad direction");
  if (direction < m) {
    const AlgebraElement step(model.algebra.basis().elements[direction] * t);
    return {group_exp(step) * p.s, p.u};
  }
  const AlgebraElement step(model.algebra.basis().elements[direction - m] * t);
  return {p.s, p.u + step};
}

Vector frame_bracket(const Algebra& algebra, int i, int j) {
  const int m = algebra.dim();
  Vector out = Vector::Zero(2 * m);
  if (i < m && j < m)
    for (int k = 0; k < m; ++k) out[k] = -algebra.structure()(k, i, j);
  return out;
}

const char* to_string(FormTag tag) {
  switch (tag) {
    case FormTag::ThetaS: return "THETA_S";
    case FormTag::Coframe: return "COFRAME";
    case FormTag::OmegaS: return "OMEGA_S";
    case FormTag::JK: return "JK";
    case FormTag::LCurv: return "LCURV";
    case FormTag::OmegaNH: return "OMEGA_NH";
    case FormTag::OmegaTilde: return "OMEGA_TILDE";
    case FormTag::Scaled: return "SCALED";
    case FormTag::Sum: return "SUM";
    case FormTag::TruncatedJK: return "TRUNCATED_JK";
  }
  return "UNKNOWN";
}

ScalarField conformal_factor_field() {
  return {[](const FrameContext& ctx) { return conformal_factor(*ctx.model, ctx.point.s); },
          [](const FrameContext& ctx, int d) { return conformal_factor_derivative(ctx, d); }};
}

// ---------------------------------------------------------------------------
// Form containers

OneFormOnTS::OneFormOnTS(FormTag tag, std::string name, Components components, Derivative derivative)
    : tag_(tag), name_(std::move(name)), components_(std::move(components)),
      derivative_(std::move(derivative)) {}

Vector OneFormOnTS::frame_derivative(const FrameContext& ctx, int direction) const {
  if (!derivative_) throw std::logic_error(name_ + ": no closed-form derivative registered");
  return derivative_(ctx, direction);
}

double OneFormOnTS::evaluate(const BallModel& model, const PhasePoint& p,
                             const TangentVectorTS& v) const {
  const FrameContext ctx(model, p);
  return components(ctx).dot(frame_coords(ctx, v));
}

TwoFormOnTS::TwoFormOnTS(FormTag tag, std::string name, Components components, Derivative derivative)
    : tag_(tag), name_(std::move(name)), components_(std::move(components)),
      derivative_(std::move(derivative)) {}

Matrix TwoFormOnTS::frame_derivative(const FrameContext& ctx, int direction) const {
  if (!derivative_) throw std::logic_error(name_ + ": no closed-form derivative registered");
  return derivative_(ctx, direction);
}

double TwoFormOnTS::evaluate(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
                             const TangentVectorTS& v2) const {
  const FrameContext ctx(model, p);
  return frame_coords(ctx, v1).dot(components(ctx) * frame_coords(ctx, v2));
}

// ---------------------------------------------------------------------------
// Named forms

OneFormOnTS theta_S_form() {
  return OneFormOnTS(
      FormTag::ThetaS, "theta_S",
      [](const FrameContext& ctx) {
        const int m = ctx.model->dim();
        Vector w = Vector::Zero(2 * m);
        w.head(m) = theta_base(ctx.model->algebra, ctx.ut, ctx.mt);
        return w;
      },
      [](const FrameContext& ctx, int d) {
        const int m = ctx.model->dim();
        const ContextTangent t = context_derivative(ctx, d);
        Vector w = Vector::Zero(2 * m);
        w.head(m) = theta_base(ctx.model->algebra, t.dut, t.dmt);
        return w;
      });
}

OneFormOnTS coframe_form(int k) {
  return OneFormOnTS(
      FormTag::Coframe, "coframe_" + std::to_string(k),
      [k](const FrameContext& ctx) {
        const BallModel& model = *ctx.model;
        const int m = model.dim();
        if (k < 0 || k >= m) throw std::out_of_range("coframe_form: index out of range");
        const Matrix& s = ctx.point.s.matrix();
        const Matrix& target = model.algebra.basis().elements[k];
        Vector w = Vector::Zero(2 * m);
        for (int j = 0; j < m; ++j) {
          const Matrix frame_vec = s.transpose() * model.algebra.basis().elements[j] * s;
          w[j] = killing_ip(s * frame_vec * s.transpose(), target);
        }
        return w;
      },
      [](const FrameContext& ctx, int) { return Vector::Zero(2 * ctx.model->dim()).eval(); });
}

TwoFormOnTS compose_forms(FormTag tag, const std::optional<ScalarField>& f) {
  switch (tag) {
    case FormTag::OmegaS:
      return TwoFormOnTS(tag, "omega_S", omega_s_components, omega_s_derivative);
    case FormTag::JK:
      return TwoFormOnTS(tag, "jk", jk_components, jk_derivative);
    case FormTag::LCurv:
      return TwoFormOnTS(tag, "lcurv", lcurv_components, lcurv_derivative);
    case FormTag::OmegaNH:
      return TwoFormOnTS(
          tag, "omega_nh",
          [](const FrameContext& ctx) { return (omega_s_components(ctx) - jk_components(ctx)).eval(); },
          [](const FrameContext& ctx, int d) {
            return (omega_s_derivative(ctx, d) - jk_derivative(ctx, d)).eval();
          });
    case FormTag::OmegaTilde:
      return TwoFormOnTS(
          tag, "omega_tilde",
          [](const FrameContext& ctx) { return (omega_s_components(ctx) - lcurv_components(ctx)).eval(); },
          [](const FrameContext& ctx, int d) {
            return (omega_s_derivative(ctx, d) - lcurv_derivative(ctx, d)).eval();
          });
    case FormTag::Scaled:
      if (!f) throw std::invalid_argument("compose_forms: SCALED requires a scalar field");
      return scaled_form(*f, compose_forms(FormTag::OmegaTilde));
    case FormTag::TruncatedJK:
      return TwoFormOnTS(tag, "truncated_jk", [](const FrameContext& ctx) {
        const Matrix chi = chi_matrix(ctx);
        return (chi.transpose() * jk_components(ctx) * chi).eval();
      });
    default:
      throw std::invalid_argument(std::string("compose_forms: unsupported tag ") + to_string(tag));
  }
}

TwoFormOnTS scaled_form(const ScalarField& f, const TwoFormOnTS& form) {
  TwoFormOnTS::Derivative derivative;
  if (f.derivative && form.has_closed_form_derivative()) {
    derivative = [f, form](const FrameContext& ctx, int d) {
      return (f.derivative(ctx, d) * form.components(ctx) +
              f.value(ctx) * form.frame_derivative(ctx, d))
          .eval();
    };
  }
  return TwoFormOnTS(
      FormTag::Scaled, "scaled_" + form.name(),
      [f, form](const FrameContext& ctx) { return (f.value(ctx) * form.components(ctx)).eval(); },
      derivative);
}

TwoFormOnTS sum_forms(double c1, const TwoFormOnTS& f1, double c2, const TwoFormOnTS& f2) {
  TwoFormOnTS::Derivative derivative;
  if (f1.has_closed_form_derivative() && f2.has_closed_form_derivative()) {
    derivative = [=](const FrameContext& ctx, int d) {
      return (c1 * f1.frame_derivative(ctx, d) + c2 * f2.frame_derivative(ctx, d)).eval();
    };
  }
  return TwoFormOnTS(
      FormTag::Sum, "sum(" + f1.name() + "," + f2.name() + ")",
      [=](const FrameContext& ctx) { return (c1 * f1.components(ctx) + c2 * f2.components(ctx)).eval(); },
      derivative);
}

double theta_S(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v) {
  return theta_S_form().evaluate(model, p, v);
}

double omega_S(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
               const TangentVectorTS& v2) {
  return compose_forms(FormTag::OmegaS).evaluate(model, p, v1, v2);
}

double jk_term(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
               const TangentVectorTS& v2) {
  return compose_forms(FormTag::JK).evaluate(model, p, v1, v2);
}

double lcurv_term(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
                  const TangentVectorTS& v2) {
  return compose_forms(FormTag::LCurv).evaluate(model, p, v1, v2);
}

double theta_S_pairing(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v) {
  return killing_ip(apply_metric_phi(model, p.s, p.u), v.a);
}

// ---------------------------------------------------------------------------
// χ and σ

Matrix chi_matrix(const FrameContext& ctx, double threshold) {
  const Algebra& alg = ctx.model->algebra;
  const int m = alg.dim();
  const int np = alg.dim_perp();
  for (int a = 0; a < np; ++a) {
    if (!(std::abs(ctx.ut[a]) > threshold)) {
      std::ostringstream msg;
      msg << "point outside U': |g_" << (a + 1) << "| = " << std::abs(ctx.ut[a])
          << " <= " << threshold;
      throw NearEquilibriumError(msg.str());
    }
  }
  Matrix chi = Matrix::Zero(2 * m, 2 * m);
  chi.bottomRightCorner(m, m).setIdentity();
  for (int a = 0; a < np; ++a) chi(a, a) = 1.0;
  for (int alpha = np; alpha < m; ++alpha)
    for (int a = 0; a < np; ++a) chi(alpha, a) = ctx.ut[alpha] / (np * ctx.ut[a]);
  return chi;
}

TangentVectorTS chi_projection(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v,
                               double threshold) {
  const FrameContext ctx(model, p);
  return from_frame_coords(ctx, chi_matrix(ctx, threshold) * frame_coords(ctx, v));
}

Vector sigma_connection(const FrameContext& ctx, const Vector& frame_vector, double threshold) {
  // σ = id − χ on the base block, read off on the ξ-rows.
  const Algebra& alg = ctx.model->algebra;
  const int m = alg.dim();
  const int np = alg.dim_perp();
  const Vector projected = chi_matrix(ctx, threshold) * frame_vector;
  return (frame_vector - projected).segment(np, m - np);
}

// ---------------------------------------------------------------------------
// Exterior derivative

double FrameTensor3::contract(const Vector& x, const Vector& y, const Vector& z) const {
  double total = 0.0;
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0.0) continue;
      double inner = 0.0;
      for (int k = 0; k < dim_; ++k) inner += (*this)(i, j, k) * z[k];
      total += x[i] * y[j] * inner;
    }
  }
  return total;
}

Matrix exterior_derivative_tensor(const BallModel& model, const OneFormOnTS& form,
                                  const PhasePoint& p, const ExteriorDerivativeOptions& options) {
  const FrameContext ctx(model, p);
  const int dim = 2 * model.dim();
  const Vector w = form.components(ctx);
  std::vector<Vector> dw(dim);
  const bool closed = options.mode == DerivativeMode::Registered && form.has_closed_form_derivative();
  for (int d = 0; d < dim; ++d) {
    dw[d] = closed ? form.frame_derivative(ctx, d)
                   : central_difference<Vector>(model, p, d, options.step,
                                                [&](const FrameContext& c) { return form.components(c); });
  }
  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double v = dw[i][j] - dw[j][i];
      for (int l = 0; l < model.dim(); ++l) v += bracket_coeff(model.algebra, l, i, j) * w[l];
      out(i, j) = v;
    }
  return out;
}

FrameTensor3 exterior_derivative_tensor(const BallModel& model, const TwoFormOnTS& form,
                                        const PhasePoint& p, const ExteriorDerivativeOptions& options) {
  const FrameContext ctx(model, p);
  const int m = model.dim();
  const int dim = 2 * m;
  const Matrix w = form.components(ctx);
  std::vector<Matrix> dw(dim);
  const bool closed = options.mode == DerivativeMode::Registered && form.has_closed_form_derivative();
  for (int d = 0; d < dim; ++d) {
    dw[d] = closed ? form.frame_derivative(ctx, d)
                   : central_difference<Matrix>(model, p, d, options.step,
                                                [&](const FrameContext& c) { return form.components(c); });
  }
  // −ω([F_i,F_j],F_k) = Σ_l C^l_{ij} ω_{lk}; only base indices carry brackets.
  FrameTensor3 out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        double v = dw[i](j, k) - dw[j](i, k) + dw[k](i, j);
        for (int l = 0; l < m; ++l) {
          v += bracket_coeff(model.algebra, l, i, j) * w(l, k) -
               bracket_coeff(model.algebra, l, i, k) * w(l, j) +
               bracket_coeff(model.algebra, l, j, k) * w(l, i);
        }
        out(i, j, k) = v;
      }
  return out;
}

double exterior_derivative(const BallModel& model, const OneFormOnTS& form, const PhasePoint& p,
                           std::span<const TangentVectorTS> vectors,
                           const ExteriorDerivativeOptions& options) {
  if (vectors.size() != 2)
    throw std::invalid_argument("exterior_derivative: a 1-form needs exactly 2 vectors, got " +
                                std::to_string(vectors.size()));
  const FrameContext ctx(model, p);
  const Matrix d = exterior_derivative_tensor(model, form, p, options);
  return frame_coords(ctx, vectors[0]).dot(d * frame_coords(ctx, vectors[1]));
}

double exterior_derivative(const BallModel& model, const TwoFormOnTS& form, const PhasePoint& p,
                           std::span<const TangentVectorTS> vectors,
                           const ExteriorDerivativeOptions& options) {
  if (vectors.size() != 3)
    throw std::invalid_argument("exterior_derivative: a 2-form needs exactly 3 vectors, got " +
                                std::to_string(vectors.size()));
  const FrameContext ctx(model, p);
  const FrameTensor3 d = exterior_derivative_tensor(model, form, p, options);
  return d.contract(frame_coords(ctx, vectors[0]), frame_coords(ctx, vectors[1]),
                    frame_coords(ctx, vectors[2]));
}

}  // namespace chaplygin
