#include "spbfgs/linalg.hpp"

#include <cmath>

#include "spbfgs/error.hpp"

namespace spbfgs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::CurvatureViolation: return "CurvatureViolation";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::MissingMetadata: return "MissingMetadata";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::EmptyCell: return "EmptyCell";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::BadDimension, "symmetric matrix must be square");
  }
  if (!all_finite(m)) {
    throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
  }
  const Eigen::Index n = m.rows();
  m_.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m_(j, j) = m(j, j);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
  }
}

SymMatrix SymMatrix::identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

bool is_positive_definite(const SymMatrix& a, double pivot_tol) {
  const Eigen::Index n = a.size();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > pivot_tol)) return false;
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / d;
    }
  }
  return true;
}

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace spbfgs
