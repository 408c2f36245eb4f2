#pragma once

#include "chaplygin/son_algebra.hpp"

#include <array>

namespace chaplygin {

/**
 * @brief Symmetric positive-definite inertia operator on so(n).
 *
 * Stored as a matrix acting on adapted-basis coefficient vectors (mass and
 * radius normalised to 1).
 */
class InertiaTensor {
 public:
  /// Throws std::invalid_argument unless symmetric to 1e-13 and positive
  /// definite.
  explicit InertiaTensor(Matrix matrix);

  static InertiaTensor identity(int n);
  static InertiaTensor diagonal(const Vector& diag);
  /// Principal moments about the space axes e_1, e_2, e_3 for n = 3. Rotation
  /// about e_1 is generated by Z_2, about e_2 by Z_1 and about e_3 by Y_3.
  static InertiaTensor principal3(double i1, double i2, double i3);

  const Matrix& matrix() const { return matrix_; }
  const Matrix& inverse() const { return inverse_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  bool homogeneous() const { return homogeneous_; }

 private:
  Matrix matrix_;
  Matrix inverse_;
  bool homogeneous_ = false;
};

/// The ball: the so(n) data together with its inertia.
struct BallModel {
  BallModel(int n, InertiaTensor inertia);

  Algebra algebra;
  InertiaTensor inertia;

  int n() const { return algebra.n(); }
  int dim() const { return algebra.dim(); }
};

/// Left-trivialised point (s, u) of TS = T*S.
struct PhasePoint {
  GroupElement s;
  AlgebraElement u;
};

/// l_α, g_a and their inertia-weighted counterparts l̃_α, g̃_a.
struct CoframeSample {
  Vector l;
  Vector g;
  Vector l_tilde;
  Vector g_tilde;
};

/**
 * @brief Space-frame quantities at a phase point.
 *
 * R is Ad(s) on coefficients, ut = Ad(s)u and mt = Ad(s)𝕀u. In these terms
 * g = ut|h⊥, l = ut|h, g̃ = mt|h⊥, l̃ = mt|h. The frame derivatives of every
 * coefficient function used by the forms are linear in (R, ut, mt); see
 * ContextTangent.
 */
struct FrameContext {
  FrameContext(const BallModel& model, const PhasePoint& point);

  const BallModel* model;
  PhasePoint point;
  Matrix R;
  Vector u;
  Vector ut;
  Vector mt;
};

/// Derivative of (R, ut, mt) along one of the 2m frame fields on TS.
struct ContextTangent {
  Matrix dR;
  Vector dut;
  Vector dmt;
};

/// Frame index d < m is the lift of the right-invariant field generated by
/// B_d (flow (exp(tB_d)s, u)); d ≥ m is the fiber field V_{d−m}.
ContextTangent context_derivative(const FrameContext& ctx, int direction);

/// −Σ_a g_a e_a.
Vector connection_A(const BallModel& model, const PhasePoint& p);

/// The contact-point route: −Σ_a ⟨e_a, (Ad(s)u) e_n⟩ e_a using matrices only.
Vector connection_A_contact(const PhasePoint& p);

CoframeSample coframe_coeffs(const BallModel& model, const PhasePoint& p);

double compressed_hamiltonian(const BallModel& model, const PhasePoint& p);

/// J_H = Σ l̃_α Y_α.
AlgebraElement momentum_JH(const BallModel& model, const PhasePoint& p);

/// ξ_α(s) = Ad(s⁻¹)Y_α and ζ_a(s) = Ad(s⁻¹)Z_a, computed by conjugation.
AlgebraElement frame_xi(const BallModel& model, const GroupElement& s, int alpha);
AlgebraElement frame_zeta(const BallModel& model, const GroupElement& s, int a);

/// Φ_s = 𝕀 + A*A on body coefficients: Φ_s u = 𝕀u + Σ g_a ζ_a(s).
Matrix metric_phi(const BallModel& model, const GroupElement& s);

/// Applies Φ_s via matrices (independent of metric_phi).
AlgebraElement apply_metric_phi(const BallModel& model, const GroupElement& s,
                                const AlgebraElement& u);

/// f(s) = (det Φ_s)^{−1/2}.
double conformal_factor(const BallModel& model, const GroupElement& s);

/// Closed-form derivative of f along a frame field (zero along fiber fields).
double conformal_factor_derivative(const FrameContext& ctx, int direction);

/// N_a = Tr(Φ⁻¹ ζ_a.Φ); df = −½ f Σ N_a η^a.
Vector conformal_trace_coefficients(const FrameContext& ctx);

/// Embeds h ∈ SO(n−1) as the stabiliser of e_n.
GroupElement embed_stabilizer(const Matrix& h);

}  // namespace chaplygin
