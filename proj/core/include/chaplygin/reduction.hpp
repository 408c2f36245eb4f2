#pragma once

#include "chaplygin/dynamics.hpp"
#include "chaplygin/sampling.hpp"

#include <cstdint>
#include <vector>

namespace chaplygin {

/// (h, (s, u)) ↦ (hs, u) for h fixing e_n. Throws std::invalid_argument
/// unless h e_n = e_n to 1e-12.
PhasePoint h_action(const GroupElement& h, const PhasePoint& p);

/// Singular values of J_H viewed as a skew (n−1)×(n−1) matrix; constant on
/// Ad(H)-orbits.
Vector orbit_invariants(const BallModel& model, const AlgebraElement& level);

struct ReducedSample {
  Vector gamma;  ///< s⁻¹e_n
  AlgebraElement u;
  AlgebraElement level;  ///< J_H
  Vector orbit_invariants;
};

ReducedSample project_reduced(const BallModel& model, const PhasePoint& p);

/// Orthonormal basis (in frame coordinates) of ker dJ_H at p.
struct LevelSetFrame {
  Matrix basis;  ///< 2m × k, columns in frame coordinates
  std::vector<TangentVectorTS> vectors;
  int rank = 0;  ///< numerical rank of dJ_H
};

/// Null space of dJ_H via SVD with cutoff 1e-10·σ_max. Throws
/// std::runtime_error if the rank drops below dim h.
LevelSetFrame level_set_frame(const BallModel& model, const PhasePoint& p);

enum class ClosednessForm { OmegaNH, OmegaTilde, FOmegaTilde };
const char* to_string(ClosednessForm form);
TwoFormOnTS closedness_form(ClosednessForm form);

/// max |dω(v1, v2, v3)| over all triples of level-set basis vectors
/// (restrict) or of frame vectors (otherwise).
double closedness_verdict(const BallModel& model, const PhasePoint& p, ClosednessForm form,
                          bool restrict, const ExteriorDerivativeOptions& options = {});

struct WitnessResult {
  bool found = false;
  double max_residual = 0.0;
  long samples = 0;     ///< triples examined
  long first_hit = -1;  ///< index of the first triple above threshold
};

/// Seeded random search for a unit frame triple with |dω| > threshold.
/// Draws `points` random phase points and samples/points random triples at each.
WitnessResult non_closedness_witness(const BallModel& model, ClosednessForm form, std::uint64_t seed,
                                     long samples = 10000, int points = 100,
                                     double threshold = 1e-3);

/// A point with J_H = λ obtained by correcting a random velocity.
PhasePoint sample_level_point(const BallModel& model, const Vector& lambda, Sampler& sampler);

struct DimensionAudit {
  int n = 0;
  int predicted = 0;         ///< 2(n−1) + dim h − dim h_λ
  int measured = 0;          ///< dim level set − dim H_λ-orbit
  int level_set_dim = 0;
  int stabilizer_dim_predicted = 0;  ///< dim ker ad_λ on h
  int stabilizer_dim_measured = 0;   ///< generators tangent to the level set
  int orbit_dim = 0;                 ///< rank of the H_λ generators at the sample
};

DimensionAudit reduced_dimension_audit(const BallModel& model, const Vector& lambda, Sampler& sampler);

}  // namespace chaplygin
