#pragma once

#include <variant>

#include "spbfgs/linalg.hpp"
#include "spbfgs/qn_core.hpp"

namespace spbfgs {

// Rules for proposing beta_k from the step.

/// beta = +inf every iteration (plain BFGS).
struct ConstantInfinity {};
struct ConstantBeta {
  double beta = 1.0;
};
/// beta = slope * |s| + offset. An infinite slope yields beta = +inf for s != 0.
struct LinearInStep {
  double slope = 1.0;
  double offset = 1e-10;
};
/// beta = max(slope * |s| - intercept, 0).
struct Thresholded {
  double slope = 1.0;
  double intercept = 1.0;
};
using BetaRule = std::variant<ConstantInfinity, ConstantBeta, LinearInStep, Thresholded>;

// What to do when the curvature condition fails for the proposed beta.

struct SkipRecovery {};
/// beta = -1/(c3 s.y), valid for any c3 > 1 when s.y < 0.
struct ShrinkBeta {
  double c3 = 2.0;
};
using Recovery = std::variant<SkipRecovery, ShrinkBeta>;

// Extra admission tests used by the BFGS baseline.

struct NoSkipRule {};
struct SkipOnNonpositive {};
/// Admit only if s.y >= eps |s|^2.
struct EpsStepNorm {
  double eps = 1e-8;
};
/// Admit only if s.y >= zeta |s| |y|.
struct CosineBound {
  double zeta = 0.1;
};
using SkipRule = std::variant<NoSkipRule, SkipOnNonpositive, EpsStepNorm, CosineBound>;

struct PenaltyPolicy {
  BetaRule rule = ConstantInfinity{};
  Recovery recovery = SkipRecovery{};
  SkipRule skip_rule = NoSkipRule{};

  /// Throws ConfigError when a parameter is out of range.
  void validate() const;
};

/// Presets used by the noisy experiments. `eps_g` is the gradient-noise bound.
PenaltyPolicy linear_policy_unit_slope(double eps_g);
PenaltyPolicy linear_policy_scaled_slope(double eps_g, double scale = 1e8);

PenaltyParameter propose_beta(const PenaltyPolicy& policy, const Vector& s);

enum class UpdateAction { Update, Skipped };

struct BetaResolution {
  PenaltyParameter beta = PenaltyParameter::zero();
  UpdateAction action = UpdateAction::Skipped;
};

/// Accepts `proposed` when the curvature condition holds, otherwise applies
/// the policy's recovery. Never returns Update with a failing condition.
BetaResolution resolve_beta(const PenaltyPolicy& policy, const CurvaturePair& pair,
                            PenaltyParameter proposed);

bool baseline_skip_check(const SkipRule& rule, const CurvaturePair& pair);

}  // namespace spbfgs
