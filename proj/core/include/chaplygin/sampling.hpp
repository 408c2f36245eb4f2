#pragma once

#include "chaplygin/ball_model.hpp"

#include <cstdint>
#include <random>

namespace chaplygin {

/// Seeded generator for random test data. Same seed, same sequence.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Vector normal_vector(int k);
  Vector unit_vector(int k);

  AlgebraElement algebra_element(int n, double scale = 1.0);
  /// Haar-distributed rotation (QR of a Gaussian matrix with sign fix).
  GroupElement rotation(int n);
  /// Random element of the stabiliser of e_n.
  GroupElement stabilizer(int n);
  PhasePoint phase_point(int n, double u_scale = 1.0);

  /// Symmetric positive definite with eigenvalues in [lo, hi] and random eigenvectors.
  InertiaTensor spd_inertia(int n, double lo = 0.5, double hi = 2.0);
  InertiaTensor diagonal_inertia(int n, double lo = 0.5, double hi = 2.0);

  /// Rejection-samples a point with every |g_a| ≥ min_g.
  PhasePoint point_in_U_prime(const BallModel& model, double min_g = 0.05);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace chaplygin
