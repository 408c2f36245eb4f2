#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace chaplygin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dimension of so(n).
inline int so_dim(int n) { return n * (n - 1) / 2; }

/**
 * @brief Element of so(n) stored as a skew-symmetric n×n matrix.
 *
 * The coefficient view refers to the adapted basis (Z-block first, then the
 * Y-block in lexicographic (i,j) order), see AdaptedBasis. Extraction reads
 * matrix entries directly, so coeffs -> matrix -> coeffs is exact.
 */
class AlgebraElement {
 public:
  AlgebraElement() = default;

  /// Takes ownership of a square matrix; throws if it is not skew to 1e-13
  /// (relative to its magnitude).
  explicit AlgebraElement(Matrix matrix);

  static AlgebraElement zero(int n);
  static AlgebraElement from_coeffs(const Vector& coeffs, int n);

  const Matrix& matrix() const { return matrix_; }
  int n() const { return static_cast<int>(matrix_.rows()); }
  Vector coeffs() const;

  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator-(const AlgebraElement& other) const;
  AlgebraElement operator-() const;
  AlgebraElement operator*(double scale) const;

 private:
  struct Unchecked {};
  AlgebraElement(Matrix matrix, Unchecked) : matrix_(std::move(matrix)) {}

  Matrix matrix_;
};

inline AlgebraElement operator*(double scale, const AlgebraElement& x) { return x * scale; }

/// Element of SO(n).
class GroupElement {
 public:
  GroupElement() = default;

  /// Throws unless sᵀs = 1 to 1e-10 and det s > 0.
  explicit GroupElement(Matrix matrix);

  static GroupElement identity(int n);

  const Matrix& matrix() const { return matrix_; }
  int n() const { return static_cast<int>(matrix_.rows()); }

  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& other) const;

  /// ‖sᵀs − 1‖_max.
  double orthogonality_defect() const;

  /// Nearest rotation (polar factor).
  GroupElement reorthonormalized() const;

 private:
  struct Unchecked {};
  GroupElement(Matrix matrix, Unchecked) : matrix_(std::move(matrix)) {}
  friend GroupElement group_exp(const AlgebraElement& x);
  friend GroupElement group_exp_series(const AlgebraElement& x);
  friend GroupElement nearest_rotation(const Matrix& m);

  Matrix matrix_;
};

/**
 * @brief Killing-orthonormal basis of so(n) adapted to h ⊕ h⊥.
 *
 * h = {X : X e_n = 0} ≅ so(n−1) and h⊥ has support in the last row/column.
 * Index k < n−1 is Z_{k+1} = E_{k+1,n} − E_{n,k+1}; index k ≥ n−1 runs over
 * Y_(i,j) = E_ij − E_ji, i < j ≤ n−1, lexicographically. E_ij e_j = e_i.
 */
struct AdaptedBasis {
  int n = 0;
  std::vector<Matrix> elements;

  int dim() const { return static_cast<int>(elements.size()); }
  int dim_perp() const { return n - 1; }
  int dim_h() const { return dim() - dim_perp(); }
  bool is_perp(int k) const { return k < dim_perp(); }

  /// Z_a for a = 1..n−1.
  const Matrix& Z(int a) const { return elements[a - 1]; }
  /// Y_α for α = 1..dim h.
  const Matrix& Y(int alpha) const { return elements[dim_perp() + alpha - 1]; }
};

/// C^k_{ij} with [B_i, B_j] = Σ_k C^k_{ij} B_k.
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(int dim);

  int dim() const { return dim_; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }

  /// Matrix of ad_{B_i} on coefficient vectors: (ad_i)_{kj} = C^k_{ij}.
  Matrix ad_matrix(int i) const;

  /// Coefficients of [X, Y] from coefficients of X and Y.
  Vector bracket(const Vector& x, const Vector& y) const;

  double antisymmetry_residual() const;
  double jacobi_residual() const;

 private:
  int index(int k, int i, int j) const { return (k * dim_ + i) * dim_ + j; }

  int dim_ = 0;
  std::vector<double> data_;
};

AdaptedBasis adapted_basis(int n);

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// ⟨X, Y⟩ = −½ tr(XY).
double killing_ip(const AlgebraElement& x, const AlgebraElement& y);
double killing_ip(const Matrix& x, const Matrix& y);

StructureTensor structure_constants(const AdaptedBasis& basis);

/// Ad(s)X = s X sᵀ.
AlgebraElement ad_action(const GroupElement& s, const AlgebraElement& x);

/// Matrix of Ad(s) acting on adapted-basis coefficients.
Matrix adjoint_matrix(const GroupElement& s);

/// Matrix exponential; closed-form Rodrigues for n = 3, otherwise
/// group_exp_series.
GroupElement group_exp(const AlgebraElement& x);

/// Scaling-and-squaring with a fixed-order Taylor series.
GroupElement group_exp_series(const AlgebraElement& x);

/// Polar factor UVᵀ of an arbitrary square matrix with positive determinant.
GroupElement nearest_rotation(const Matrix& m);

/**
 * @brief Everything about so(n) the rest of the library needs, built once.
 *
 * Holds the adapted basis, the structure tensor and the ad matrices of the
 * basis elements.
 */
class Algebra {
 public:
  explicit Algebra(int n);
  Algebra(AdaptedBasis basis, StructureTensor structure);

  int n() const { return basis_.n; }
  int dim() const { return basis_.dim(); }
  int dim_h() const { return basis_.dim_h(); }
  int dim_perp() const { return basis_.dim_perp(); }

  const AdaptedBasis& basis() const { return basis_; }
  const StructureTensor& structure() const { return structure_; }
  const Matrix& ad(int i) const { return ad_[i]; }

  /// Diagonal 0/1 projector onto the h⊥ block of coefficient space.
  const Matrix& perp_projector() const { return perp_; }
  /// Diagonal 0/1 projector onto the h block.
  const Matrix& h_projector() const { return h_; }

 private:
  void build_cache();

  AdaptedBasis basis_;
  StructureTensor structure_;
  std::vector<Matrix> ad_;
  Matrix perp_;
  Matrix h_;
};

}  // namespace chaplygin
