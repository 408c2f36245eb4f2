#include "chaplygin/son_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace chaplygin {
namespace {

// (row, col) with row < col for every adapted-basis index.
std::vector<std::pair<int, int>> basis_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(so_dim(n));
  for (int a = 0; a < n - 1; ++a) pairs.emplace_back(a, n - 1);
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n - 1; ++j) pairs.emplace_back(i, j);
  return pairs;
}

const std::vector<std::pair<int, int>>& cached_pairs(int n) {
  // n is small in practice; build lazily per dimension.
  static thread_local std::vector<std::vector<std::pair<int, int>>> cache;
  if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1);
  if (cache[n].empty()) cache[n] = basis_pairs(n);
  return cache[n];
}

void require_same_dim(int a, int b, const char* op) {
  if (a != b)
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
}

}  // namespace

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("AlgebraElement: matrix must be square");
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if ((matrix_ + matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-13 * scale)
    throw std::invalid_argument("AlgebraElement: matrix is not skew-symmetric");
}

AlgebraElement AlgebraElement::zero(int n) { return {Matrix::Zero(n, n), Unchecked{}}; }

AlgebraElement AlgebraElement::from_coeffs(const Vector& coeffs, int n) {
  if (coeffs.size() != so_dim(n))
    throw std::invalid_argument("AlgebraElement::from_coeffs: expected " +
                                std::to_string(so_dim(n)) + " coefficients");
  Matrix m = Matrix::Zero(n, n);
  const auto& pairs = cached_pairs(n);
  for (int k = 0; k < coeffs.size(); ++k) {
    const auto [i, j] = pairs[k];
    m(i, j) = coeffs[k];
    m(j, i) = -coeffs[k];
  }
  return {std::move(m), Unchecked{}};
}

Vector AlgebraElement::coeffs() const {
  const int n = this->n();
  const auto& pairs = cached_pairs(n);
  Vector c(so_dim(n));
  for (int k = 0; k < c.size(); ++k) c[k] = matrix_(pairs[k].first, pairs[k].second);
  return c;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  require_same_dim(n(), other.n(), "AlgebraElement::operator+");
  return {matrix_ + other.matrix_, Unchecked{}};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
  require_same_dim(n(), other.n(), "AlgebraElement::operator-");
  return {matrix_ - other.matrix_, Unchecked{}};
}

AlgebraElement AlgebraElement::operator-() const { return {-matrix_, Unchecked{}}; }

AlgebraElement AlgebraElement::operator*(double scale) const {
  return {matrix_ * scale, Unchecked{}};
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement::GroupElement(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("GroupElement: matrix must be square");
  if (orthogonality_defect() > 1e-10)
    throw std::invalid_argument("GroupElement: matrix is not orthogonal");
  if (matrix_.determinant() <= 0.0)
    throw std::invalid_argument("GroupElement: determinant must be +1");
}

GroupElement GroupElement::identity(int n) { return {Matrix::Identity(n, n), Unchecked{}}; }

GroupElement GroupElement::inverse() const { return {matrix_.transpose(), Unchecked{}}; }

GroupElement GroupElement::operator*(const GroupElement& other) const {
  require_same_dim(n(), other.n(), "GroupElement::operator*");
  return {matrix_ * other.matrix_, Unchecked{}};
}

double GroupElement::orthogonality_defect() const {
  const int n = this->n();
  return (matrix_.transpose() * matrix_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

GroupElement GroupElement::reorthonormalized() const { return nearest_rotation(matrix_); }

GroupElement nearest_rotation(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("nearest_rotation: matrix must be square");
  if (m.determinant() <= 0.0)
    throw std::invalid_argument("nearest_rotation: determinant must be positive");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix q = svd.matrixU() * svd.matrixV().transpose();
  return {std::move(q), GroupElement::Unchecked{}};
}

// ---------------------------------------------------------------------------
// Basis and structure constants

AdaptedBasis adapted_basis(int n) {
  if (n < 3) throw std::invalid_argument("adapted_basis: n must be at least 3");
  AdaptedBasis basis;
  basis.n = n;
  for (const auto& [i, j] : basis_pairs(n)) {
    Matrix b = Matrix::Zero(n, n);
    b(i, j) = 1.0;
    b(j, i) = -1.0;
    basis.elements.push_back(std::move(b));
  }
  return basis;
}

StructureTensor::StructureTensor(int dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

Matrix StructureTensor::ad_matrix(int i) const {
  Matrix ad(dim_, dim_);
  for (int k = 0; k < dim_; ++k)
    for (int j = 0; j < dim_; ++j) ad(k, j) = (*this)(k, i, j);
  return ad;
}

Vector StructureTensor::bracket(const Vector& x, const Vector& y) const {
  Vector out = Vector::Zero(dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < dim_; ++j) out[k] += (*this)(k, i, j) * x[i] * y[j];
    }
  return out;
}

double StructureTensor::antisymmetry_residual() const {
  double r = 0.0;
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r = std::max(r, std::abs((*this)(k, i, j) + (*this)(k, j, i)));
  return r;
}

double StructureTensor::jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) {
          double sum = 0.0;
          for (int m = 0; m < dim_; ++m)
            sum += (*this)(m, i, j) * (*this)(l, m, k) + (*this)(m, j, k) * (*this)(l, m, i) +
                   (*this)(m, k, i) * (*this)(l, m, j);
          worst = std::max(worst, std::abs(sum));
        }
  return worst;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_dim(x.n(), y.n(), "bracket");
  return AlgebraElement::from_coeffs(
             AlgebraElement(x.matrix() * y.matrix() - y.matrix() * x.matrix()).coeffs(), x.n());
}

double killing_ip(const Matrix& x, const Matrix& y) {
  require_same_dim(static_cast<int>(x.rows()), static_cast<int>(y.rows()), "killing_ip");
  // tr(XY) without forming the product.
  return -0.5 * (x.array() * y.transpose().array()).sum();
}

double killing_ip(const AlgebraElement& x, const AlgebraElement& y) {
  return killing_ip(x.matrix(), y.matrix());
}

StructureTensor structure_constants(const AdaptedBasis& basis) {
  const int m = basis.dim();
  StructureTensor c(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Matrix comm =
          basis.elements[i] * basis.elements[j] - basis.elements[j] * basis.elements[i];
      for (int k = 0; k < m; ++k) c(k, i, j) = killing_ip(comm, basis.elements[k]);
    }
  return c;
}

AlgebraElement ad_action(const GroupElement& s, const AlgebraElement& x) {
  require_same_dim(s.n(), x.n(), "ad_action");
  return AlgebraElement::from_coeffs(
      AlgebraElement(s.matrix() * x.matrix() * s.matrix().transpose()).coeffs(), x.n());
}

Matrix adjoint_matrix(const GroupElement& s) {
  // Ad(s)(E_ij − E_ji) = s_i s_jᵀ − s_j s_iᵀ with s_i the i-th column.
  const int n = s.n();
  const Matrix& g = s.matrix();
  const auto& pairs = cached_pairs(n);
  const int m = static_cast<int>(pairs.size());
  Matrix r(m, m);
  for (int col = 0; col < m; ++col) {
    const auto [i, j] = pairs[col];
    for (int row = 0; row < m; ++row) {
      const auto [p, q] = pairs[row];
      r(row, col) = g(p, i) * g(q, j) - g(p, j) * g(q, i);
    }
  }
  return r;
}

GroupElement group_exp_series(const AlgebraElement& x) {
  const int n = x.n();
  const Matrix& a = x.matrix();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);

  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 16; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return {std::move(result), GroupElement::Unchecked{}};
}

GroupElement group_exp(const AlgebraElement& x) {
  if (x.n() != 3) return group_exp_series(x);
  const Matrix& a = x.matrix();
  const double theta = std::sqrt(std::max(0.0, killing_ip(a, a)));
  Matrix result = Matrix::Identity(3, 3);
  if (theta < 1e-4) {
    // Series coefficients of sinθ/θ and (1−cosθ)/θ².
    const double t2 = theta * theta;
    const double c1 = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    const double c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    result += c1 * a + c2 * a * a;
  } else {
    result += (std::sin(theta) / theta) * a + ((1.0 - std::cos(theta)) / (theta * theta)) * a * a;
  }
  return {std::move(result), GroupElement::Unchecked{}};
}

// ---------------------------------------------------------------------------
// Algebra

Algebra::Algebra(int n) : basis_(adapted_basis(n)), structure_(structure_constants(basis_)) {
  build_cache();
}

Algebra::Algebra(AdaptedBasis basis, StructureTensor structure)
    : basis_(std::move(basis)), structure_(std::move(structure)) {
  if (structure_.dim() != basis_.dim())
    throw std::invalid_argument("Algebra: structure tensor does not match basis");
  build_cache();
}

void Algebra::build_cache() {
  const int m = dim();
  ad_.clear();
  for (int i = 0; i < m; ++i) ad_.push_back(structure_.ad_matrix(i));
  perp_ = Matrix::Zero(m, m);
  h_ = Matrix::Zero(m, m);
  for (int k = 0; k < m; ++k) (basis_.is_perp(k) ? perp_ : h_)(k, k) = 1.0;
}

}  // namespace chaplygin
