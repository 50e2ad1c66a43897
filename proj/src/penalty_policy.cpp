#include "spbfgs/penalty_policy.hpp"

#include <algorithm>
#include <cmath>

#include "spbfgs/error.hpp"

namespace spbfgs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::ConfigError, what);
}

}  // namespace

void PenaltyPolicy::validate() const {
  std::visit(overloaded{
                 [](const ConstantInfinity&) {},
                 [](const ConstantBeta& r) { require(r.beta >= 0.0, "constant beta must be >= 0"); },
                 [](const LinearInStep& r) {
                   require(r.slope > 0.0, "slope N_s must be > 0");
                   require(r.offset >= 0.0 && std::isfinite(r.offset), "offset must be >= 0");
                 },
                 [](const Thresholded& r) {
                   require(r.slope > 0.0, "slope N_s must be > 0");
                   require(r.intercept > 0.0, "intercept N_o must be > 0");
                 },
             },
             rule);
  if (const auto* shrink = std::get_if<ShrinkBeta>(&recovery)) {
    require(shrink->c3 > 1.0, "c3 must be > 1");
  }
  std::visit(overloaded{
                 [](const NoSkipRule&) {},
                 [](const SkipOnNonpositive&) {},
                 [](const EpsStepNorm& r) { require(r.eps > 0.0, "epsilon must be > 0"); },
                 [](const CosineBound& r) {
                   require(r.zeta > 0.0 && r.zeta < 1.0, "zeta must lie in (0, 1)");
                 },
             },
             skip_rule);
}

PenaltyPolicy linear_policy_unit_slope(double eps_g) {
  PenaltyPolicy p;
  p.rule = LinearInStep{1.0 / eps_g, 1e-10};
  return p;
}

PenaltyPolicy linear_policy_scaled_slope(double eps_g, double scale) {
  PenaltyPolicy p;
  p.rule = LinearInStep{scale / eps_g, 1e-10};
  return p;
}

PenaltyParameter propose_beta(const PenaltyPolicy& policy, const Vector& s) {
  const double step = s.norm();
  return std::visit(
      overloaded{
          [](const ConstantInfinity&) { return PenaltyParameter::infinite(); },
          [](const ConstantBeta& r) { return PenaltyParameter::finite(r.beta); },
          [step](const LinearInStep& r) {
            if (step == 0.0) return PenaltyParameter::finite(r.offset);
            return PenaltyParameter::finite(r.slope * step + r.offset);
          },
          [step](const Thresholded& r) {
            if (step == 0.0) return PenaltyParameter::zero();
            return PenaltyParameter::finite(std::max(r.slope * step - r.intercept, 0.0));
          },
      },
      policy.rule);
}

BetaResolution resolve_beta(const PenaltyPolicy& policy, const CurvaturePair& pair,
                            PenaltyParameter proposed) {
  if (spbfgs_curvature_ok(pair, proposed)) return {proposed, UpdateAction::Update};

  if (const auto* shrink = std::get_if<ShrinkBeta>(&policy.recovery)) {
    const bool degenerate = pair.s().isZero(0.0) || pair.y().isZero(0.0);
    if (!degenerate && pair.sty() < 0.0) {
      const double beta = -1.0 / (shrink->c3 * pair.sty());
      if (std::isfinite(beta)) {
        const auto candidate = PenaltyParameter::finite(beta);
        if (spbfgs_curvature_ok(pair, candidate)) return {candidate, UpdateAction::Update};
      }
    }
  }
  return {PenaltyParameter::zero(), UpdateAction::Skipped};
}

bool baseline_skip_check(const SkipRule& rule, const CurvaturePair& pair) {
  const double sty = pair.sty();
  return std::visit(overloaded{
                        [](const NoSkipRule&) { return true; },
                        [sty](const SkipOnNonpositive&) { return sty > 0.0; },
                        [&](const EpsStepNorm& r) { return sty >= r.eps * pair.s().squaredNorm(); },
                        [&](const CosineBound& r) {
                          return sty >= r.zeta * pair.s().norm() * pair.y().norm();
                        },
                    },
                    rule);
}

}  // namespace spbfgs
