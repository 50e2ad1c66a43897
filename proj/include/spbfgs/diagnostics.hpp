#pragma once

#include <cstddef>

#include "spbfgs/linalg.hpp"
#include "spbfgs/optimizer.hpp"
#include "spbfgs/problems.hpp"
#include "spbfgs/qn_core.hpp"

namespace spbfgs {

/// Constants of the strongly convex analysis: m I <= Hess <= M I,
/// psi I <= H <= Psi I, and the gradient noise bound.
struct TheoryParams {
  double m = 0.0;
  double big_m = 0.0;
  double psi = 1.0;
  double big_psi = 1.0;
  double eps_g_bar = 0.0;

  void validate() const;
  /// Height of the noise-dominated region above phi*: (Psi eps_g / psi)^2 / (2 m).
  double noise_floor() const;
};

/// (1 + gamma |y||s|)^2 Tr(H) + gamma |s|^2, an upper bound on Tr(H+).
double trace_bound_H(const SymMatrix& h, const CurvaturePair& pair, const PenaltyScalars& scalars);

/// (1 + beta |y||s|) Tr(B) + gamma |y|^2, an upper bound on Tr(B+).
/// Infinite when beta is infinite and y, s are nonzero.
double trace_bound_B(const SymMatrix& b, const CurvaturePair& pair, const PenaltyScalars& scalars,
                     PenaltyParameter beta);

/// phi(x) <= phi* + noise_floor(). Throws MissingMetadata when the problem
/// has no strong-convexity constant and params.m is unset.
bool in_noise_region(const Problem& problem, const Vector& x, const TheoryParams& params);

struct EnvelopeCheck {
  bool holds = true;
  std::size_t steps_checked = 0;
  std::size_t steps_excluded = 0;  // x_k inside the noise region
  std::size_t violations = 0;
};

/// Checks phi_{k+1} - L <= (1 - alpha psi m)(phi_k - L), L = phi* + noise_floor(),
/// for every step whose x_k lies outside the noise region. A relative slack
/// of 1e-12 |phi_k| absorbs rounding in the phi evaluations.
EnvelopeCheck qlinear_envelope_ok(const RunTrace& trace, const Problem& problem,
                                  const TheoryParams& params, double alpha);

/// cond_2(H * hess) from the singular values of the product.
double scaled_condition_number(const SymMatrix& h, const SymMatrix& hess);

}  // namespace spbfgs
