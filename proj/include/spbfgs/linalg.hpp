#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace spbfgs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric n x n matrix. Storage is exactly symmetric and finite.
///
/// Every constructor symmetrizes its input as (M + M^T) / 2, which is exact
/// in IEEE arithmetic because addition commutes, so entry (i,j) and (j,i)
/// are bitwise equal afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Symmetrizes `m`. Throws BadDimension for non-square input and NonFinite
  /// for NaN/Inf entries.
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Eigen::Index n);
  static SymMatrix diagonal(const Vector& d);

  Eigen::Index size() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix& dense() const { return m_; }

  double trace() const { return m_.trace(); }
  double quad_form(const Vector& v) const { return v.dot(m_ * v); }
  Vector operator*(const Vector& v) const { return m_ * v; }

  bool operator==(const SymMatrix& other) const {
    return m_.rows() == other.m_.rows() && m_ == other.m_;
  }

 private:
  Matrix m_;
};

/// Pivot-thresholded Cholesky test: true iff every pivot of the unpivoted
/// factorization exceeds `pivot_tol`.
bool is_positive_definite(const SymMatrix& a, double pivot_tol = 1e-12);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

}  // namespace spbfgs
