#include "doctest.h"
#include "spbfgs/error.hpp"
#include "spbfgs/linalg.hpp"
#include "support.hpp"

using namespace spbfgs;

TEST_CASE("SymMatrix symmetrizes exactly") {
  std::mt19937_64 rng(3);
  Matrix m(5, 5);
  for (Eigen::Index j = 0; j < 5; ++j) m.col(j) = testing::gaussian(5, rng);
  const SymMatrix s(m);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) CHECK(s(i, j) == s(j, i));
  CHECK(s(1, 2) == doctest::Approx(0.5 * (m(1, 2) + m(2, 1))));
}

TEST_CASE("SymMatrix rejects bad input") {
  CHECK_THROWS_AS(SymMatrix(Matrix::Zero(2, 3)), Error);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymMatrix{m}, Error);
}

TEST_CASE("positive definiteness check uses the pivot tolerance") {
  CHECK(is_positive_definite(SymMatrix::identity(3)));
  CHECK_FALSE(is_positive_definite(SymMatrix::diagonal(Vector::Constant(2, -1.0))));
  Vector d(2);
  d << 1.0, 1e-13;
  CHECK_FALSE(is_positive_definite(SymMatrix::diagonal(d)));
  CHECK(is_positive_definite(SymMatrix::diagonal(d), 1e-14));
}
