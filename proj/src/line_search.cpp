#include "spbfgs/line_search.hpp"

#include "spbfgs/error.hpp"

namespace spbfgs {

void LineSearchConfig::validate() const {
  if (!(c1 > 0.0 && c1 < 1.0)) throw Error(ErrorKind::ConfigError, "c1 must lie in (0, 1)");
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorKind::ConfigError, "tau must lie in (0, 1)");
  if (!(alpha0 > 0.0)) throw Error(ErrorKind::ConfigError, "alpha0 must be > 0");
  if (!(eps_a >= 0.0)) throw Error(ErrorKind::ConfigError, "eps_a must be >= 0");
  if (max_backtracks < 1) throw Error(ErrorKind::ConfigError, "max_backtracks must be >= 1");
}

bool relaxed_armijo_ok(double f_k, double f_trial, double g_dot_p, double alpha,
                       const LineSearchConfig& cfg) {
  return f_trial <= f_k + cfg.c1 * alpha * g_dot_p + 2.0 * cfg.eps_a;
}

LineSearchResult backtrack(NoisyOracle& oracle, const Vector& x, const Vector& p, double f_x,
                           double g_dot_p, const LineSearchConfig& cfg, long max_evals) {
  if (!all_finite(p)) throw Error(ErrorKind::NonFinite, "search direction is not finite");
  LineSearchResult out;
  out.f_accepted = f_x;
  double alpha = cfg.alpha0;
  for (int j = 0; j < cfg.max_backtracks; ++j, alpha *= cfg.tau) {
    if (max_evals >= 0 && out.evals_used >= max_evals) break;
    const Vector trial = x + alpha * p;
    const double f_trial = oracle.noisy_f(trial);
    ++out.evals_used;
    if (relaxed_armijo_ok(f_x, f_trial, g_dot_p, alpha, cfg)) {
      out.alpha = alpha;
      out.f_accepted = f_trial;
      return out;
    }
  }
  return out;
}

}  // namespace spbfgs
