#pragma once

#include <limits>

#include "spbfgs/linalg.hpp"

namespace spbfgs {

/// Secant penalty parameter beta in [0, +inf]. Infinity is an explicit state
/// rather than a large float so the BFGS limit is reproduced exactly.
class PenaltyParameter {
 public:
  /// Throws DegenerateInput for negative or NaN values. +inf maps to infinite().
  static PenaltyParameter finite(double value);
  static PenaltyParameter infinite() { return PenaltyParameter(0.0, true); }
  static PenaltyParameter zero() { return PenaltyParameter(0.0, false); }

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && value_ == 0.0; }
  /// +inf for the infinite state.
  double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  bool operator==(const PenaltyParameter&) const = default;

 private:
  PenaltyParameter(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Step s_k = x_{k+1} - x_k and gradient difference y_k with cached s.y.
class CurvaturePair {
 public:
  CurvaturePair(Vector s, Vector y);

  const Vector& s() const { return s_; }
  const Vector& y() const { return y_; }
  double sty() const { return sty_; }
  Eigen::Index size() const { return s_.size(); }

 private:
  Vector s_;
  Vector y_;
  double sty_;
};

/// gamma = 1/(s.y + 1/beta), omega = 1/(s.y + 2/beta), with the limits
/// beta = 0 -> (0, 0) and beta = inf -> (rho, rho).
struct PenaltyScalars {
  PenaltyParameter beta = PenaltyParameter::zero();
  double gamma = 0.0;
  double omega = 0.0;
};

PenaltyScalars compute_penalty_scalars(const CurvaturePair& pair, PenaltyParameter beta);

/// s.y > -1/beta (always true for beta = 0, s.y > 0 for beta = inf).
bool spbfgs_curvature_ok(const CurvaturePair& pair, PenaltyParameter beta);

/// Classic BFGS inverse-Hessian update in product form
/// (I - rho s y^T) H (I - rho y s^T) + rho s s^T. Requires s.y > 0.
SymMatrix bfgs_update(const SymMatrix& h, const CurvaturePair& pair);

/// BFGS update of the Hessian approximation B = H^{-1}.
SymMatrix bfgs_inverse_update(const SymMatrix& b, const CurvaturePair& pair);

/// Secant-penalized BFGS update of the inverse Hessian approximation:
///
///   H+ = (I - w s y^T) H (I - w y s^T) + w [g/w + (g - w) y^T H y] s s^T
///
/// with g = gamma, w = omega. Throws CurvatureViolation when the SP-BFGS
/// curvature condition fails and NonFinite on overflow. beta = 0 returns
/// `h` unchanged.
SymMatrix spbfgs_update(const SymMatrix& h, const CurvaturePair& pair,
                        const PenaltyScalars& scalars);

/// Same closed form without the curvature precondition. The result is
/// symmetric but indefinite whenever the curvature condition fails.
SymMatrix spbfgs_update_unchecked(const SymMatrix& h, const CurvaturePair& pair,
                                  const PenaltyScalars& scalars);

/// The SP-BFGS update expressed on B = H^{-1}. `h` supplies y^T H y, which
/// cannot be recovered from B alone. Throws SingularDenominator when the
/// scalar denominator is below `denom_rel_tol` relative to its terms.
SymMatrix spbfgs_inverse_update(const SymMatrix& b, const SymMatrix& h,
                                const CurvaturePair& pair, const PenaltyScalars& scalars,
                                double denom_rel_tol = 1e-12);

/// W = y y^T/(y.s) + c (I - s s^T/(s.s)). SPD with W s = y; used only by the
/// penalized-QP oracle.
SymMatrix make_weight_matrix(const CurvaturePair& pair, double c);

/// Brute-force minimizer of
///   1/2 |W^{1/2}(H' - H)W^{1/2}|_F^2 + beta/2 |W^{1/2}(H' y - s)|^2
/// over symmetric H', solved as a dense least-squares problem in the
/// n(n+1)/2 upper-triangle unknowns. Independent of the closed form.
SymMatrix oracle_penalized_qp(const SymMatrix& h, const CurvaturePair& pair, double beta,
                              const SymMatrix& w);

}  // namespace spbfgs
