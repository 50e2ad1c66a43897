#pragma once

#include "spbfgs/linalg.hpp"
#include "spbfgs/noise_oracle.hpp"

namespace spbfgs {

/// Backtracking on the relaxed sufficient-decrease test
///   f(x + a p) <= f(x) + c1 a g^T p + 2 eps_a.
/// Trial steps are alpha0 * tau^j for j < max_backtracks; when all fail the
/// step is zero.
struct LineSearchConfig {
  double c1 = 1e-4;
  double alpha0 = 1.0;
  double tau = 0.5;
  double eps_a = 0.0;
  int max_backtracks = 75;

  void validate() const;
};

bool relaxed_armijo_ok(double f_k, double f_trial, double g_dot_p, double alpha,
                       const LineSearchConfig& cfg);

struct LineSearchResult {
  double alpha = 0.0;  // 0 when every trial failed
  int evals_used = 0;
  double f_accepted = 0.0;  // noisy f at the accepted trial; f_x when alpha = 0
};

/// `g_dot_p` is evaluated once at x and reused for every trial. `max_evals`
/// caps the trials further (remaining evaluation budget); negative means
/// no extra cap.
LineSearchResult backtrack(NoisyOracle& oracle, const Vector& x, const Vector& p, double f_x,
                           double g_dot_p, const LineSearchConfig& cfg, long max_evals = -1);

}  // namespace spbfgs
