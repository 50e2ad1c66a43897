#include "doctest.h"
#include "spbfgs/error.hpp"
#include "spbfgs/line_search.hpp"

using namespace spbfgs;

TEST_CASE("relaxed Armijo test") {
  LineSearchConfig cfg;
  CHECK_FALSE(relaxed_armijo_ok(10.0, 10.0, -1.0, 1.0, cfg));
  cfg.eps_a = 1.0;
  CHECK(relaxed_armijo_ok(10.0, 10.0, -1.0, 1.0, cfg));
  cfg.eps_a = 0.0;
  CHECK(relaxed_armijo_ok(10.0, 9.0, -1.0, 1.0, cfg));
}

TEST_CASE("backtracking") {
  auto quad = std::make_shared<const Problem>(quadratic_1d());
  Vector x(1);
  x << 1.0;

  SUBCASE("full step on a smooth quadratic") {
    NoisyOracle oracle(quad, NoiseSpec{});
    Vector p(1);
    p << -1.0;
    const auto r = backtrack(oracle, x, p, 1.0, -2.0, LineSearchConfig{});
    CHECK(r.alpha == 1.0);
    CHECK(r.evals_used == 1);
    CHECK(r.f_accepted == 0.0);
  }
  SUBCASE("ascent direction exhausts the trials") {
    NoisyOracle oracle(quad, NoiseSpec{});
    Vector p(1);
    p << 1.0;
    LineSearchConfig cfg;
    // Past ~53 halvings x + a p rounds back to x and the test passes with equality.
    cfg.max_backtracks = 40;
    const auto r = backtrack(oracle, x, p, 1.0, 2.0, cfg);
    CHECK(r.alpha == 0.0);
    CHECK(r.evals_used == cfg.max_backtracks);
    CHECK(r.f_accepted == 1.0);
    CHECK(oracle.f_evals() == cfg.max_backtracks);
  }
  SUBCASE("evaluation cap") {
    NoisyOracle oracle(quad, NoiseSpec{});
    Vector p(1);
    p << 1.0;
    const auto r = backtrack(oracle, x, p, 1.0, 2.0, LineSearchConfig{}, 3);
    CHECK(r.alpha == 0.0);
    CHECK(r.evals_used == 3);
  }
  SUBCASE("noisy Rosenbrock counts every trial and replays") {
    auto rosen = std::make_shared<const Problem>(rosenbrock());
    auto run = [&](std::uint64_t seed) {
      NoisyOracle oracle(rosen, NoiseSpec{1e-2, 1e-2, seed});
      const Vector x0 = rosen->x0;
      const Vector g = oracle.noisy_g(x0);
      const double f = oracle.noisy_f(x0);
      const Vector p = -g;
      LineSearchConfig cfg;
      cfg.eps_a = 1e-2;
      cfg.max_backtracks = 45;
      const auto r = backtrack(oracle, x0, p, f, g.dot(p), cfg);
      CHECK(r.evals_used == oracle.f_evals() - 1);
      return r;
    };
    const auto a = run(5);
    const auto b = run(5);
    CHECK(a.alpha > 0.0);
    CHECK(a.alpha == b.alpha);
    CHECK(a.evals_used == b.evals_used);
    CHECK(a.f_accepted == b.f_accepted);
  }
  SUBCASE("non-finite values are reported") {
    Problem bad = quadratic_1d();
    bad.eval_f = [](const Vector&) { return std::numeric_limits<double>::quiet_NaN(); };
    NoisyOracle oracle(std::make_shared<const Problem>(bad), NoiseSpec{});
    Vector p(1);
    p << -1.0;
    CHECK_THROWS_AS(backtrack(oracle, x, p, 1.0, -2.0, LineSearchConfig{}), Error);
  }
}

TEST_CASE("line search config validation") {
  LineSearchConfig cfg;
  cfg.c1 = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = LineSearchConfig{};
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = LineSearchConfig{};
  cfg.eps_a = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = LineSearchConfig{};
  cfg.max_backtracks = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
