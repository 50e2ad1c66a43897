#include "spbfgs/optimizer.hpp"

#include <cmath>
#include <limits>

#include "spbfgs/diagnostics.hpp"
#include "spbfgs/error.hpp"

namespace spbfgs {

void RunConfig::validate() const {
  policy.validate();
  ls.validate();
  noise.validate();
  if (budget.limit <= 0) throw Error(ErrorKind::ConfigError, "budget must be > 0");
  if (h0 && !is_positive_definite(*h0)) {
    throw Error(ErrorKind::ConfigError, "H0 must be positive definite");
  }
}

namespace {

bool budget_exhausted(const Budget& budget, long k, const NoisyOracle& oracle) {
  if (budget.kind == Budget::Kind::Iterations) return k >= budget.limit;
  return oracle.f_evals() >= budget.limit;
}

void finish(RunTrace& trace, const Problem& problem, const Vector& x, const NoisyOracle& oracle) {
  trace.final_x = x;
  trace.final_phi = problem.eval_f(x);
  trace.phi_best = oracle.best_true_f();
  trace.f_evals = oracle.f_evals();
  trace.g_evals = oracle.g_evals();
}

}  // namespace

RunTrace minimize(std::shared_ptr<const Problem> problem_ptr, const RunConfig& cfg, Rng stream) {
  cfg.validate();
  const Problem& problem = *problem_ptr;
  NoisyOracle oracle(problem_ptr, cfg.noise, std::move(stream));
  const Eigen::Index n = problem.n;

  Vector x = cfg.x0.value_or(problem.x0);
  if (x.size() != n) throw Error(ErrorKind::BadDimension, "x0 dimension mismatch");
  SymMatrix h = cfg.h0.value_or(SymMatrix::identity(n));
  if (h.size() != n) throw Error(ErrorKind::BadDimension, "H0 dimension mismatch");

  RunTrace trace;
  long k = 0;
  try {
    double f = oracle.noisy_f(x);
    Vector g = oracle.noisy_g(x);

    for (; !budget_exhausted(cfg.budget, k, oracle); ++k) {
      IterationRecord rec;
      rec.k = k;
      rec.x = x;
      rec.f = f;
      rec.phi = problem.eval_f(x);
      rec.grad_norm = problem.eval_grad(x).norm();
      rec.beta = std::numeric_limits<double>::quiet_NaN();
      if (cfg.record_hessian_diagnostics) {
        rec.h_positive_definite = is_positive_definite(h);
        if (problem.has_hessian()) {
          try {
            rec.scaled_condition = scaled_condition_number(h, problem.eval_hess(x));
          } catch (const Error&) {
            rec.scaled_condition = std::numeric_limits<double>::infinity();
          }
        }
      }

      const Vector p = -(h * g);
      const double g_dot_p = g.dot(p);
      const long remaining = cfg.budget.kind == Budget::Kind::FunctionEvals
                                 ? cfg.budget.limit - oracle.f_evals()
                                 : -1;
      const LineSearchResult ls = backtrack(oracle, x, p, f, g_dot_p, cfg.ls, remaining);
      rec.alpha = ls.alpha;
      rec.ls_exhausted = ls.alpha == 0.0;

      const Vector x_next = ls.alpha == 0.0 ? x : Vector(x + ls.alpha * p);
      const Vector g_next = oracle.noisy_g(x_next);
      CurvaturePair pair(x_next - x, g_next - g);
      rec.sty = pair.sty();

      if (ls.alpha > 0.0) {
        if (!baseline_skip_check(cfg.policy.skip_rule, pair)) {
          rec.curvature_failed = true;
        } else {
          const PenaltyParameter proposed = propose_beta(cfg.policy, pair.s());
          const BetaResolution res = resolve_beta(cfg.policy, pair, proposed);
          if (res.action == UpdateAction::Skipped) {
            rec.curvature_failed = true;
            rec.beta = 0.0;
          } else {
            rec.recovered = !(res.beta == proposed);
            rec.beta = res.beta.value();
            h = spbfgs_update(h, pair, compute_penalty_scalars(pair, res.beta));
          }
        }
      }
      if (rec.curvature_failed) ++trace.curvature_failures;

      x = x_next;
      f = ls.f_accepted;
      g = g_next;
      rec.evals_so_far = oracle.f_evals();
      trace.records.push_back(std::move(rec));
    }
  } catch (const Error& e) {
    trace.failed = true;
    trace.failure = e.what();
  }
  trace.iterations = k;
  finish(trace, problem, x, oracle);
  return trace;
}

RunTrace minimize(const Problem& problem, const RunConfig& cfg) {
  return minimize(std::make_shared<const Problem>(problem), cfg,
                  derive_stream(cfg.noise.seed, {}));
}

namespace {

RunConfig as_baseline(const RunConfig& cfg) {
  RunConfig out = cfg;
  out.policy.rule = ConstantInfinity{};
  out.policy.recovery = SkipRecovery{};
  return out;
}

}  // namespace

RunTrace minimize_baseline_bfgs(std::shared_ptr<const Problem> problem, const RunConfig& cfg,
                                Rng stream) {
  return minimize(std::move(problem), as_baseline(cfg), std::move(stream));
}

RunTrace minimize_baseline_bfgs(const Problem& problem, const RunConfig& cfg) {
  return minimize(problem, as_baseline(cfg));
}

RunTrace fixed_step_run(const Problem& problem, const SymMatrix& h, double alpha,
                        long iterations, const NoiseSpec& noise) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::ConfigError, "fixed step must be > 0");
  auto ptr = std::make_shared<const Problem>(problem);
  NoisyOracle oracle(ptr, noise);
  Vector x = problem.x0;
  RunTrace trace;
  long k = 0;
  try {
    for (; k < iterations; ++k) {
      IterationRecord rec;
      rec.k = k;
      rec.x = x;
      rec.phi = problem.eval_f(x);
      rec.f = rec.phi;
      rec.grad_norm = problem.eval_grad(x).norm();
      rec.alpha = alpha;
      rec.beta = 0.0;
      const Vector g = oracle.noisy_g(x);
      x -= alpha * (h * g);
      if (!all_finite(x)) throw Error(ErrorKind::NonFinite, "iterate diverged");
      trace.records.push_back(std::move(rec));
    }
  } catch (const Error& e) {
    trace.failed = true;
    trace.failure = e.what();
  }
  trace.iterations = k;
  trace.final_x = x;
  trace.final_phi = problem.eval_f(x);
  trace.phi_best = trace.final_phi;
  for (const auto& r : trace.records) trace.phi_best = std::min(trace.phi_best, r.phi);
  trace.g_evals = oracle.g_evals();
  return trace;
}

}  // namespace spbfgs
