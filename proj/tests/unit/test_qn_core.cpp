#include "doctest.h"
#include "spbfgs/error.hpp"
#include "spbfgs/qn_core.hpp"
#include "support.hpp"

using namespace spbfgs;
using testing::max_abs_diff;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// s.y set to an exact value along the first axis.
CurvaturePair pair_with_sty(double sty) { return CurvaturePair(v2(1.0, 0.0), v2(sty, 0.0)); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("penalty scalars") {
  SUBCASE("finite beta") {
    const auto sc = compute_penalty_scalars(pair_with_sty(1.0), PenaltyParameter::finite(1.0));
    CHECK(sc.gamma == doctest::Approx(0.5));
    CHECK(sc.omega == doctest::Approx(1.0 / 3.0));
    CHECK(sc.omega <= sc.gamma);
  }
  SUBCASE("beta = 0") {
    const auto sc = compute_penalty_scalars(pair_with_sty(5.0), PenaltyParameter::zero());
    CHECK(sc.gamma == 0.0);
    CHECK(sc.omega == 0.0);
  }
  SUBCASE("beta = inf gives rho") {
    const auto sc = compute_penalty_scalars(pair_with_sty(2.0), PenaltyParameter::infinite());
    CHECK(sc.gamma == 0.5);
    CHECK(sc.omega == 0.5);
  }
  SUBCASE("zero denominator") {
    CHECK(kind_of([] { compute_penalty_scalars(pair_with_sty(-1.0), PenaltyParameter::finite(1.0)); }) ==
          ErrorKind::NonFinite);
    CHECK(kind_of([] { compute_penalty_scalars(pair_with_sty(0.0), PenaltyParameter::infinite()); }) ==
          ErrorKind::NonFinite);
  }
  SUBCASE("+inf through finite() is the infinite state") {
    CHECK(PenaltyParameter::finite(std::numeric_limits<double>::infinity()).is_infinite());
    CHECK_THROWS_AS(PenaltyParameter::finite(-1.0), Error);
  }
}

TEST_CASE("curvature condition") {
  CHECK(spbfgs_curvature_ok(pair_with_sty(-0.5), PenaltyParameter::finite(1.0)));
  CHECK_FALSE(spbfgs_curvature_ok(pair_with_sty(-0.5), PenaltyParameter::infinite()));
  CHECK(spbfgs_curvature_ok(pair_with_sty(-3.0), PenaltyParameter::zero()));
  CHECK_FALSE(spbfgs_curvature_ok(pair_with_sty(-1.0), PenaltyParameter::finite(1.0)));
}

TEST_CASE("BFGS update") {
  SUBCASE("identity is a fixed point when the secant already holds") {
    const SymMatrix h = bfgs_update(SymMatrix::identity(2), CurvaturePair(v2(1, 0), v2(1, 0)));
    CHECK(max_abs_diff(h.dense(), Matrix::Identity(2, 2)) == 0.0);
  }
  SUBCASE("secant condition") {
    std::mt19937_64 rng(11);
    const SymMatrix h = testing::random_spd(4, rng);
    const CurvaturePair pair = testing::random_positive_pair(4, rng);
    const SymMatrix next = bfgs_update(h, pair);
    CHECK((next * pair.y() - pair.s()).norm() <= 1e-10);
    CHECK(is_positive_definite(next));
  }
  SUBCASE("matches the infinite-penalty update") {
    std::mt19937_64 rng(12);
    const SymMatrix h = testing::random_spd(3, rng);
    const CurvaturePair pair = testing::random_positive_pair(3, rng);
    const SymMatrix sp =
        spbfgs_update(h, pair, compute_penalty_scalars(pair, PenaltyParameter::infinite()));
    CHECK(max_abs_diff(sp.dense(), bfgs_update(h, pair).dense()) <= 1e-12);
  }
  SUBCASE("rejects nonpositive curvature") {
    CHECK(kind_of([] { bfgs_update(SymMatrix::identity(2), CurvaturePair(v2(1, 0), v2(-1, 0))); }) ==
          ErrorKind::CurvatureViolation);
  }
}

TEST_CASE("SP-BFGS update") {
  std::mt19937_64 rng(21);
  SUBCASE("beta = 0 returns H unchanged, whatever the sign of s.y") {
    const SymMatrix h = testing::random_spd(3, rng);
    const CurvaturePair pair(testing::gaussian(3, rng), testing::gaussian(3, rng));
    const SymMatrix next =
        spbfgs_update(h, pair, compute_penalty_scalars(pair, PenaltyParameter::zero()));
    CHECK(next == h);
  }
  SUBCASE("agrees with the penalized QP oracle at beta = 2") {
    const SymMatrix h = testing::random_spd(3, rng);
    const CurvaturePair pair = testing::random_positive_pair(3, rng);
    const SymMatrix closed =
        spbfgs_update(h, pair, compute_penalty_scalars(pair, PenaltyParameter::finite(2.0)));
    const SymMatrix oracle = oracle_penalized_qp(h, pair, 2.0, make_weight_matrix(pair, 1.0));
    CHECK(max_abs_diff(closed.dense(), oracle.dense()) <= 1e-8);
  }
  SUBCASE("rejects a failing curvature condition") {
    const CurvaturePair pair = pair_with_sty(-3.0);
    const auto sc = compute_penalty_scalars(pair, PenaltyParameter::finite(1.0));
    CHECK(kind_of([&] { spbfgs_update(SymMatrix::identity(2), pair, sc); }) ==
          ErrorKind::CurvatureViolation);
    // The unchecked form still evaluates, and is indefinite.
    CHECK_FALSE(is_positive_definite(spbfgs_update_unchecked(SymMatrix::identity(2), pair, sc)));
  }
  SUBCASE("y^T H+ y interpolates between y^T s and y^T H y") {
    for (int i = 0; i < 50; ++i) {
      const SymMatrix h = testing::random_spd(4, rng);
      const CurvaturePair pair = testing::random_positive_pair(4, rng);
      const double beta = 0.3 * (i + 1);
      const SymMatrix next =
          spbfgs_update(h, pair, compute_penalty_scalars(pair, PenaltyParameter::finite(beta)));
      const double ys = pair.sty();
      const double expected =
          beta * ys / (1 + beta * ys) * ys + h.quad_form(pair.y()) / (1 + beta * ys);
      CHECK(next.quad_form(pair.y()) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("positive definite iff the curvature condition holds") {
    int checked_fail = 0;
    for (int i = 0; i < 300; ++i) {
      const SymMatrix h = testing::random_spd(3, rng);
      const CurvaturePair pair(testing::gaussian(3, rng), testing::gaussian(3, rng));
      if (std::abs(pair.sty()) < 1e-2) continue;
      double beta = 0.05 + 0.01 * i;
      if (pair.sty() < 0.0) beta = (i % 2 ? 0.6 : 1.6) * (-1.0 / pair.sty());
      const PenaltyParameter b = PenaltyParameter::finite(beta);
      const bool ok = spbfgs_curvature_ok(pair, b);
      checked_fail += ok ? 0 : 1;
      const SymMatrix next = spbfgs_update_unchecked(h, pair, compute_penalty_scalars(pair, b));
      CHECK(is_positive_definite(next) == ok);
    }
    CHECK(checked_fail > 20);
  }
}

TEST_CASE("inverse (B-form) update") {
  std::mt19937_64 rng(31);
  const SymMatrix h = testing::random_spd(4, rng);
  const SymMatrix b(h.dense().inverse());
  const CurvaturePair pair = testing::random_positive_pair(4, rng);

  SUBCASE("beta = 0 returns B") {
    CHECK(spbfgs_inverse_update(b, h, pair, compute_penalty_scalars(pair, PenaltyParameter::zero())) == b);
  }
  SUBCASE("beta = inf matches the classic BFGS Hessian update") {
    const SymMatrix next =
        spbfgs_inverse_update(b, h, pair, compute_penalty_scalars(pair, PenaltyParameter::infinite()));
    CHECK(max_abs_diff(next.dense(), bfgs_inverse_update(b, pair).dense()) <= 1e-10);
  }
  SUBCASE("beta = 5 inverts the direct update") {
    const auto sc = compute_penalty_scalars(pair, PenaltyParameter::finite(5.0));
    const SymMatrix h_next = spbfgs_update(h, pair, sc);
    const SymMatrix b_next = spbfgs_inverse_update(b, h, pair, sc);
    // Oracle: direct inversion of H+.
    CHECK(max_abs_diff(b_next.dense(), h_next.dense().inverse()) <= 1e-8);
    CHECK(max_abs_diff(b_next.dense() * h_next.dense(), Matrix::Identity(4, 4)) <= 1e-8);
  }
  SUBCASE("vanishing denominator is reported") {
    const auto sc = compute_penalty_scalars(pair, PenaltyParameter::finite(5.0));
    CHECK(kind_of([&] { spbfgs_inverse_update(b, h, pair, sc, 10.0); }) ==
          ErrorKind::SingularDenominator);
  }
}

TEST_CASE("weight matrix") {
  SUBCASE("collapses to the identity") {
    const SymMatrix w = make_weight_matrix(CurvaturePair(v2(1, 0), v2(1, 0)), 1.0);
    CHECK(max_abs_diff(w.dense(), Matrix::Identity(2, 2)) == 0.0);
  }
  SUBCASE("maps s to y and is positive definite") {
    std::mt19937_64 rng(41);
    const CurvaturePair pair = testing::random_positive_pair(5, rng);
    const SymMatrix w = make_weight_matrix(pair, 3.0);
    CHECK((w * pair.s() - pair.y()).norm() <= 1e-12);
    CHECK(is_positive_definite(w));
  }
  SUBCASE("oracle minimizer does not depend on the weight") {
    std::mt19937_64 rng(42);
    const SymMatrix h = testing::random_spd(3, rng);
    const CurvaturePair pair = testing::random_positive_pair(3, rng);
    const SymMatrix a = oracle_penalized_qp(h, pair, 4.0, make_weight_matrix(pair, 0.5));
    const SymMatrix b = oracle_penalized_qp(h, pair, 4.0, make_weight_matrix(pair, 9.0));
    CHECK(max_abs_diff(a.dense(), b.dense()) <= 1e-8);
  }
  SUBCASE("degenerate input") {
    CHECK(kind_of([] { make_weight_matrix(CurvaturePair(v2(1, 0), v2(-1, 0)), 1.0); }) ==
          ErrorKind::DegenerateInput);
    CHECK(kind_of([] { make_weight_matrix(CurvaturePair(v2(1, 0), v2(1, 0)), 0.0); }) ==
          ErrorKind::DegenerateInput);
  }
}

TEST_CASE("penalized QP oracle") {
  SUBCASE("large beta nearly enforces the secant condition") {
    std::mt19937_64 rng(51);
    const SymMatrix h = testing::random_spd(2, rng);
    const CurvaturePair pair = testing::random_positive_pair(2, rng);
    const SymMatrix next = oracle_penalized_qp(h, pair, 1e12, make_weight_matrix(pair, 1.0));
    CHECK((next * pair.y() - pair.s()).norm() <= 1e-4);
  }
  SUBCASE("zero residual keeps H") {
    const CurvaturePair pair(v2(1, 0), v2(1, 0));
    Matrix w(2, 2);
    w << 1.0, 0.0, 0.0, 4.0;
    for (double beta : {0.1, 3.0, 1e4}) {
      const SymMatrix next = oracle_penalized_qp(SymMatrix::identity(2), pair, beta, SymMatrix(w));
      CHECK(max_abs_diff(next.dense(), Matrix::Identity(2, 2)) <= 1e-12);
    }
  }
  SUBCASE("requires a finite positive beta") {
    const CurvaturePair pair(v2(1, 0), v2(1, 0));
    CHECK_THROWS_AS(oracle_penalized_qp(SymMatrix::identity(2), pair, 0.0, SymMatrix::identity(2)), Error);
  }
}
