#pragma once

#include "chaplygin/ball_model.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chaplygin {

/// Tangent vector to TS at a phase point: a is the left-trivialised base
/// velocity, b the fiber velocity.
struct TangentVectorTS {
  AlgebraElement a;
  AlgebraElement b;
};

// ---------------------------------------------------------------------------
// The global frame {Ê_0..Ê_{m−1}, V_0..V_{m−1}} on T(TS).
//
// Ê_i is the lift of ζ^l_{B_i}(s) = Ad(s⁻¹)B_i with flow (exp(tB_i)s, u) and
// V_j = ∂/∂u along B_j with flow (s, u + tB_j). Brackets:
//   [Ê_i, Ê_j] = −Σ_k C^k_{ij} Ê_k,   [Ê_i, V_j] = 0,   [V_i, V_j] = 0.
// Restricted to S, {Ê} is the frame {ζ_a, ξ_α} with dual coframe {η^a, ρ^α}.

/// Coordinates of v in the frame at p (length 2m).
Vector frame_coords(const FrameContext& ctx, const TangentVectorTS& v);
TangentVectorTS from_frame_coords(const FrameContext& ctx, const Vector& coords);

/// Value of the frame field F_direction at p.
TangentVectorTS frame_field(const BallModel& model, const PhasePoint& p, int direction);

/// Exact flow of F_direction for time t.
PhasePoint frame_flow(const BallModel& model, const PhasePoint& p, int direction, double t);

/// Vector field bracket table in frame coordinates: [F_i, F_j] = Σ_k T(k) F_k.
Vector frame_bracket(const Algebra& algebra, int i, int j);

enum class FormTag {
  ThetaS,
  Coframe,
  OmegaS,
  JK,
  LCurv,
  OmegaNH,
  OmegaTilde,
  Scaled,
  Sum,
  TruncatedJK,
};

const char* to_string(FormTag tag);

/// A smooth scalar function on TS with an optional closed-form frame
/// derivative.
struct ScalarField {
  std::function<double(const FrameContext&)> value;
  std::function<double(const FrameContext&, int)> derivative;
};

/// f(s) = (det Φ_s)^{−1/2}.
ScalarField conformal_factor_field();

/**
 * @brief 1-form on TS given by its frame components.
 *
 * The optional derivative returns the directional derivative of the
 * component vector along a frame field; when absent the exterior derivative
 * falls back to finite differences.
 */
class OneFormOnTS {
 public:
  using Components = std::function<Vector(const FrameContext&)>;
  using Derivative = std::function<Vector(const FrameContext&, int)>;

  OneFormOnTS(FormTag tag, std::string name, Components components, Derivative derivative = {});

  FormTag tag() const { return tag_; }
  const std::string& name() const { return name_; }
  bool has_closed_form_derivative() const { return static_cast<bool>(derivative_); }

  Vector components(const FrameContext& ctx) const { return components_(ctx); }
  Vector frame_derivative(const FrameContext& ctx, int direction) const;

  double evaluate(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v) const;

 private:
  FormTag tag_;
  std::string name_;
  Components components_;
  Derivative derivative_;
};

/// 2-form on TS given by its antisymmetric 2m×2m frame component matrix.
class TwoFormOnTS {
 public:
  using Components = std::function<Matrix(const FrameContext&)>;
  using Derivative = std::function<Matrix(const FrameContext&, int)>;

  TwoFormOnTS(FormTag tag, std::string name, Components components, Derivative derivative = {});

  FormTag tag() const { return tag_; }
  const std::string& name() const { return name_; }
  bool has_closed_form_derivative() const { return static_cast<bool>(derivative_); }

  Matrix components(const FrameContext& ctx) const { return components_(ctx); }
  Matrix frame_derivative(const FrameContext& ctx, int direction) const;

  double evaluate(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
                  const TangentVectorTS& v2) const;

 private:
  FormTag tag_;
  std::string name_;
  Components components_;
  Derivative derivative_;
};

/// θ^S = Σ l̃_α ρ^α + Σ (g̃_a + g_a) η^a.
OneFormOnTS theta_S_form();

/// The pulled-back coframe element κ^k (η^{k+1} for k < n−1, otherwise ρ).
/// Components are evaluated by conjugating the frame vectors with s.
OneFormOnTS coframe_form(int k);

/// Builds Ω^S, ⟨J,K⟩, ⟨L,Curv^ω⟩, Ω_nh = Ω^S − ⟨J,K⟩, Ω̃ = Ω^S − ⟨L,Curv^ω⟩,
/// f·Ω̃ (tag Scaled, f required) and ⟨J,K⟩∘Λ²χ (tag TruncatedJK, defined on
/// U′ only).
TwoFormOnTS compose_forms(FormTag tag, const std::optional<ScalarField>& f = std::nullopt);

TwoFormOnTS scaled_form(const ScalarField& f, const TwoFormOnTS& form);
TwoFormOnTS sum_forms(double c1, const TwoFormOnTS& f1, double c2, const TwoFormOnTS& f2);

double theta_S(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v);
double omega_S(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
               const TangentVectorTS& v2);
double jk_term(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
               const TangentVectorTS& v2);
double lcurv_term(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v1,
                  const TangentVectorTS& v2);

/// θ^S(v) = μ_0(u, Tτ.v) = ⟨Φ_s u, a⟩ evaluated with matrices.
double theta_S_pairing(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v);

// ---------------------------------------------------------------------------
// The connection σ with σ(X_nh) = 0 on U′ = {all g_a ≠ 0} and its horizontal
// projection χ, using f^α_a = −l_α / ((n−1) g_a).

inline constexpr double kDefaultEquilibriumThreshold = 1e-8;

/// χ in frame coordinates (2m×2m). Throws NearEquilibriumError outside U′.
Matrix chi_matrix(const FrameContext& ctx, double threshold = kDefaultEquilibriumThreshold);

TangentVectorTS chi_projection(const BallModel& model, const PhasePoint& p, const TangentVectorTS& v,
                               double threshold = kDefaultEquilibriumThreshold);

/// σ(v) as coefficients on the Y-block (length dim h).
Vector sigma_connection(const FrameContext& ctx, const Vector& frame_vector,
                        double threshold = kDefaultEquilibriumThreshold);

// ---------------------------------------------------------------------------
// Exterior derivative through the invariant formula on the frame.

enum class DerivativeMode {
  /// Closed-form component derivatives where the form registers them,
  /// finite differences otherwise.
  Registered,
  /// Always finite differences along the exact frame flows.
  FiniteDifference,
};

struct ExteriorDerivativeOptions {
  DerivativeMode mode = DerivativeMode::Registered;
  double step = 1e-4;
};

/// Dense 3-index array in frame coordinates.
class FrameTensor3 {
 public:
  explicit FrameTensor3(int dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  double operator()(int i, int j, int k) const { return data_[(i * dim_ + j) * dim_ + k]; }
  double& operator()(int i, int j, int k) { return data_[(i * dim_ + j) * dim_ + k]; }
  double contract(const Vector& x, const Vector& y, const Vector& z) const;

 private:
  int dim_;
  std::vector<double> data_;
};

/// (dω)(F_i, F_j) for all frame pairs.
Matrix exterior_derivative_tensor(const BallModel& model, const OneFormOnTS& form,
                                  const PhasePoint& p, const ExteriorDerivativeOptions& options = {});

/// (dω)(F_i, F_j, F_k) for all frame triples.
FrameTensor3 exterior_derivative_tensor(const BallModel& model, const TwoFormOnTS& form,
                                        const PhasePoint& p,
                                        const ExteriorDerivativeOptions& options = {});

/// dω(v_0, v_1); throws std::invalid_argument unless exactly two vectors.
double exterior_derivative(const BallModel& model, const OneFormOnTS& form, const PhasePoint& p,
                           std::span<const TangentVectorTS> vectors,
                           const ExteriorDerivativeOptions& options = {});

/// dω(v_0, v_1, v_2); throws std::invalid_argument unless exactly three vectors.
double exterior_derivative(const BallModel& model, const TwoFormOnTS& form, const PhasePoint& p,
                           std::span<const TangentVectorTS> vectors,
                           const ExteriorDerivativeOptions& options = {});

}  // namespace chaplygin
