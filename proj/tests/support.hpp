#pragma once

// Random instance generators shared by the unit and acceptance tests.

#include <random>

#include "spbfgs/linalg.hpp"
#include "spbfgs/qn_core.hpp"

namespace spbfgs::testing {

inline Vector gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

/// A A^T / n + 0.5 I: eigenvalues bounded below by 0.5.
inline SymMatrix random_spd(Eigen::Index n, std::mt19937_64& rng) {
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = gaussian(n, rng);
  return SymMatrix(a * a.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n));
}

/// s.y >= 0.1 |s||y| so the angle between s and y stays away from 90 degrees.
inline CurvaturePair random_positive_pair(Eigen::Index n, std::mt19937_64& rng) {
  for (;;) {
    Vector s = gaussian(n, rng);
    Vector y = gaussian(n, rng);
    if (s.dot(y) < 0.0) y = -y;
    if (s.dot(y) >= 0.1 * s.norm() * y.norm()) return CurvaturePair(s, y);
  }
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace spbfgs::testing
