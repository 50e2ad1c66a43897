#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spbfgs/line_search.hpp"
#include "spbfgs/linalg.hpp"
#include "spbfgs/noise_oracle.hpp"
#include "spbfgs/penalty_policy.hpp"
#include "spbfgs/problems.hpp"

namespace spbfgs {

struct Budget {
  enum class Kind { FunctionEvals, Iterations };
  Kind kind = Kind::Iterations;
  long limit = 100;

  static Budget function_evals(long n) { return {Kind::FunctionEvals, n}; }
  static Budget iterations(long n) { return {Kind::Iterations, n}; }
};

struct RunConfig {
  PenaltyPolicy policy;
  LineSearchConfig ls;
  Budget budget;
  std::optional<SymMatrix> h0;  // identity when empty
  std::optional<Vector> x0;     // problem default when empty
  NoiseSpec noise;
  bool record_hessian_diagnostics = false;

  void validate() const;
};

/// One iteration: the state at x_k and the step taken from it.
struct IterationRecord {
  long k = 0;
  Vector x;
  double f = 0.0;          // noisy f_k used by the line search
  double phi = 0.0;        // true phi(x_k)
  double grad_norm = 0.0;  // true |grad phi(x_k)|
  double alpha = 0.0;
  double beta = 0.0;  // beta used for the update; NaN when the policy was not consulted
  double sty = 0.0;
  bool curvature_failed = false;
  bool recovered = false;     // beta shrunk by the recovery rule
  bool ls_exhausted = false;  // every backtrack failed, alpha = 0
  long evals_so_far = 0;      // noisy f evaluations after this iteration
  // Filled only with record_hessian_diagnostics.
  std::optional<bool> h_positive_definite;
  std::optional<double> scaled_condition;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  Vector final_x;
  double final_phi = 0.0;
  double phi_best = 0.0;  // smallest true phi over every evaluated point
  long iterations = 0;
  long curvature_failures = 0;
  long f_evals = 0;
  long g_evals = 0;
  bool failed = false;
  std::string failure;
};

/// SP-BFGS minimization loop: p = -H g, backtracking step, (s, y), beta from
/// the policy, update or recovery. Stops only on the budget.
RunTrace minimize(const Problem& problem, const RunConfig& cfg);
RunTrace minimize(std::shared_ptr<const Problem> problem, const RunConfig& cfg, Rng stream);

/// Plain BFGS comparison: beta fixed at +inf, updates skipped when the
/// configured skip rule (or s.y > 0) fails.
RunTrace minimize_baseline_bfgs(const Problem& problem, const RunConfig& cfg);
RunTrace minimize_baseline_bfgs(std::shared_ptr<const Problem> problem, const RunConfig& cfg,
                                Rng stream);

/// x_{k+1} = x_k - alpha H g_k with H and alpha held fixed and no line
/// search. Records phi at every iterate.
RunTrace fixed_step_run(const Problem& problem, const SymMatrix& h, double alpha,
                        long iterations, const NoiseSpec& noise);

}  // namespace spbfgs
