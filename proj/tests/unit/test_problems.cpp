#include <cmath>

#include "doctest.h"
#include "spbfgs/error.hpp"
#include "spbfgs/problems.hpp"
#include "support.hpp"

using namespace spbfgs;

namespace {

double rel_err(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

// Random points around the start and the minimizer, where the families are
// well scaled.
Vector random_point(const Problem& p, std::mt19937_64& rng) {
  Vector centre = p.argmin.value_or(p.x0);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vector x(p.n);
  for (Eigen::Index i = 0; i < p.n; ++i) x(i) = centre(i) + u(rng);
  return x;
}

}  // namespace

TEST_CASE("every built-in gradient matches finite differences") {
  std::mt19937_64 rng(3);
  for (const std::string& name : problem_names()) {
    const Problem p = make_problem(name);
    CAPTURE(name);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      Vector x = name == "QUADRATIC_ILL" ? Vector(testing::gaussian(p.n, rng) * 10.0) : random_point(p, rng);
      const double h = 1e-6 * (1.0 + x.norm());
      worst = std::max(worst, rel_err(finite_diff_grad(p, x, h), p.eval_grad(x)));
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("phi_star is a lower bound and the minimizer attains it") {
  std::mt19937_64 rng(4);
  for (const std::string& name : problem_names()) {
    const Problem p = make_problem(name);
    CAPTURE(name);
    bool below = false;
    for (int i = 0; i < 10000; ++i) below = below || p.eval_f(random_point(p, rng)) < p.phi_star;
    CHECK_FALSE(below);
    if (p.argmin) CHECK(std::abs(p.eval_f(*p.argmin) - p.phi_star) <= 1e-12);
    CHECK(p.x0.size() == p.n);
  }
}

TEST_CASE("quadratic_ill") {
  const Problem p = quadratic_ill();
  CHECK(p.eval_f(Vector::Zero(4)) == 0.0);
  CHECK(p.eval_grad(Vector::Zero(4)).norm() == 0.0);
  const Matrix t = p.eval_hess(p.x0).dense();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(t);
  CHECK(eig.eigenvalues()(0) == doctest::Approx(1e-2).epsilon(1e-10));
  CHECK(eig.eigenvalues()(3) == doctest::Approx(1e4).epsilon(1e-10));
  CHECK(eig.eigenvalues()(3) / eig.eigenvalues()(0) == doctest::Approx(1e6).epsilon(1e-8));
  const double g0 = std::log10(p.eval_grad(p.x0).norm());
  CHECK(g0 > 8.5);
  CHECK(g0 < 9.5);
  REQUIRE(p.convexity);
  CHECK(p.convexity->m == 1e-2);
  CHECK(p.convexity->big_m == 1e4);
  // Gradient is exactly T x.
  Vector x = Vector::LinSpaced(4, -3.0, 5.0);
  CHECK((p.eval_grad(x) - t * x).norm() <= 1e-12 * (t * x).norm());
  CHECK(rel_err(finite_diff_grad(p, x, 1e-3), t * x) <= 1e-5);
}

TEST_CASE("classical values") {
  Vector one = Vector::Ones(2);
  const Problem r = rosenbrock();
  CHECK(r.eval_f(one) == 0.0);
  CHECK(r.eval_grad(one).norm() == 0.0);
  Vector expected(2);
  expected << -2.0, 0.0;
  CHECK((finite_diff_grad(r, Vector::Zero(2), 1e-6) - expected).norm() <= 1e-5);
  Vector bmin(2);
  bmin << 3.0, 0.5;
  CHECK(std::abs(beale().eval_f(bmin)) <= 1e-12);
}

TEST_CASE("central differences are second order") {
  const Problem r = rosenbrock();
  Vector x(2);
  x << -0.4, 0.9;
  const Vector g = r.eval_grad(x);
  const double e1 = (finite_diff_grad(r, x, 1e-2) - g).norm();
  const double e2 = (finite_diff_grad(r, x, 5e-3) - g).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("lookup and dimensions") {
  CHECK(make_problem("rosenbr").name == "ROSENBR");
  CHECK(make_problem("SROSENBR", 6).n == 6);
  CHECK(make_problem("GENROSE", 8).n == 8);
  CHECK_THROWS_AS(make_problem("NOPE"), Error);
  CHECK_THROWS_AS(srosenbr(5), Error);
  CHECK_THROWS_AS(powellsg(6), Error);
  CHECK(benchmark_suite().size() == 11);
}
