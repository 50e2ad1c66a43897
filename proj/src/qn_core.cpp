#include "spbfgs/qn_core.hpp"

#include <cmath>
#include <vector>

#include "spbfgs/error.hpp"

namespace spbfgs {

PenaltyParameter PenaltyParameter::finite(double value) {
  if (std::isnan(value) || value < 0.0) {
    throw Error(ErrorKind::DegenerateInput, "penalty parameter must be >= 0");
  }
  if (std::isinf(value)) return infinite();
  return PenaltyParameter(value, false);
}

CurvaturePair::CurvaturePair(Vector s, Vector y) : s_(std::move(s)), y_(std::move(y)) {
  if (s_.size() != y_.size()) {
    throw Error(ErrorKind::BadDimension, "s and y must share dimension");
  }
  sty_ = s_.dot(y_);
}

PenaltyScalars compute_penalty_scalars(const CurvaturePair& pair, PenaltyParameter beta) {
  PenaltyScalars out;
  out.beta = beta;
  if (beta.is_zero()) return out;

  const double sty = pair.sty();
  if (beta.is_infinite()) {
    if (sty == 0.0) throw Error(ErrorKind::NonFinite, "rho = 1/(s.y) with s.y = 0");
    out.gamma = out.omega = 1.0 / sty;
  } else {
    const double inv = 1.0 / beta.value();
    const double dg = sty + inv;
    const double dw = sty + 2.0 * inv;
    if (dg == 0.0 || dw == 0.0) {
      throw Error(ErrorKind::NonFinite, "zero denominator in penalty scalars");
    }
    out.gamma = 1.0 / dg;
    out.omega = 1.0 / dw;
  }
  if (!std::isfinite(out.gamma) || !std::isfinite(out.omega)) {
    throw Error(ErrorKind::NonFinite, "penalty scalars overflowed");
  }
  return out;
}

bool spbfgs_curvature_ok(const CurvaturePair& pair, PenaltyParameter beta) {
  if (beta.is_zero()) return true;
  if (beta.is_infinite()) return pair.sty() > 0.0;
  return pair.sty() > -1.0 / beta.value();
}

SymMatrix bfgs_update(const SymMatrix& h, const CurvaturePair& pair) {
  if (!(pair.sty() > 0.0)) {
    throw Error(ErrorKind::CurvatureViolation, "BFGS requires s.y > 0");
  }
  const Eigen::Index n = h.size();
  const double rho = 1.0 / pair.sty();
  const Matrix v = Matrix::Identity(n, n) - rho * pair.y() * pair.s().transpose();
  Matrix out = v.transpose() * h.dense() * v + rho * pair.s() * pair.s().transpose();
  if (!all_finite(out)) throw Error(ErrorKind::NonFinite, "BFGS update overflowed");
  return SymMatrix(out);
}

SymMatrix bfgs_inverse_update(const SymMatrix& b, const CurvaturePair& pair) {
  if (!(pair.sty() > 0.0)) {
    throw Error(ErrorKind::CurvatureViolation, "BFGS requires s.y > 0");
  }
  const Vector bs = b * pair.s();
  const double sbs = pair.s().dot(bs);
  Matrix out = b.dense() - (bs * bs.transpose()) / sbs +
               (pair.y() * pair.y().transpose()) / pair.sty();
  if (!all_finite(out)) throw Error(ErrorKind::NonFinite, "BFGS update overflowed");
  return SymMatrix(out);
}

SymMatrix spbfgs_update_unchecked(const SymMatrix& h, const CurvaturePair& pair,
                                  const PenaltyScalars& scalars) {
  if (scalars.beta.is_zero()) return h;
  const Vector& s = pair.s();
  const Vector hy = h * pair.y();
  const double yhy = pair.y().dot(hy);
  const double g = scalars.gamma;
  const double w = scalars.omega;

  // Expanding the factored form collapses the s s^T coefficient to
  // g (1 + w y^T H y).
  Matrix out = h.dense();
  out.noalias() -= w * (s * hy.transpose() + hy * s.transpose());
  out.noalias() += (g * (1.0 + w * yhy)) * (s * s.transpose());
  if (!all_finite(out)) throw Error(ErrorKind::NonFinite, "SP-BFGS update overflowed");
  return SymMatrix(out);
}

SymMatrix spbfgs_update(const SymMatrix& h, const CurvaturePair& pair,
                        const PenaltyScalars& scalars) {
  if (!spbfgs_curvature_ok(pair, scalars.beta)) {
    throw Error(ErrorKind::CurvatureViolation, "s.y <= -1/beta");
  }
  return spbfgs_update_unchecked(h, pair, scalars);
}

SymMatrix spbfgs_inverse_update(const SymMatrix& b, const SymMatrix& h,
                                const CurvaturePair& pair, const PenaltyScalars& scalars,
                                double denom_rel_tol) {
  if (!spbfgs_curvature_ok(pair, scalars.beta)) {
    throw Error(ErrorKind::CurvatureViolation, "s.y <= -1/beta");
  }
  if (scalars.beta.is_zero()) return b;

  const Vector& s = pair.s();
  const Vector& y = pair.y();
  const double g = scalars.gamma;
  const double w = scalars.omega;
  const double yhy = h.quad_form(y);
  const Vector bs = b * s;
  const double sbs = s.dot(bs);

  const double a = (w - g) * yhy - g / w;
  const double c = 1.0 - w * pair.sty();
  const double lead = a * w * sbs;
  const double denom = lead - c * c;
  if (!(std::abs(denom) > denom_rel_tol * (std::abs(lead) + c * c))) {
    throw Error(ErrorKind::SingularDenominator, "inverse update denominator vanished");
  }

  Matrix num = a * (bs * bs.transpose());
  num.noalias() += c * (bs * y.transpose() + y * bs.transpose());
  num.noalias() += (w * sbs) * (y * y.transpose());
  Matrix out = b.dense() - (w / denom) * num;
  if (!all_finite(out)) throw Error(ErrorKind::NonFinite, "inverse update overflowed");
  return SymMatrix(out);
}

SymMatrix make_weight_matrix(const CurvaturePair& pair, double c) {
  const Vector& s = pair.s();
  const Vector& y = pair.y();
  const double ss = s.squaredNorm();
  if (!(pair.sty() > 0.0) || ss == 0.0) {
    throw Error(ErrorKind::DegenerateInput, "weight matrix needs s.y > 0 and s != 0");
  }
  if (!(c > 0.0)) throw Error(ErrorKind::DegenerateInput, "weight scale must be > 0");
  const Eigen::Index n = s.size();
  Matrix w = (y * y.transpose()) / pair.sty() +
             c * (Matrix::Identity(n, n) - (s * s.transpose()) / ss);
  return SymMatrix(w);
}

SymMatrix oracle_penalized_qp(const SymMatrix& h, const CurvaturePair& pair, double beta,
                              const SymMatrix& w) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::DegenerateInput, "oracle needs finite beta > 0");
  }
  const Eigen::Index n = h.size();
  if (w.size() != n || pair.size() != n) {
    throw Error(ErrorKind::BadDimension, "oracle inputs disagree on dimension");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(w.dense());
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorKind::DegenerateInput, "weight matrix must be positive definite");
  }
  const Matrix r = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
                   eig.eigenvectors().transpose();

  // Unknown p <-> (i, j) with i <= j.
  const Eigen::Index unknowns = n * (n + 1) / 2;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> index;
  index.reserve(static_cast<std::size_t>(unknowns));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) index.emplace_back(i, j);

  const Eigen::Index rows = n * n + n;
  Matrix a = Matrix::Zero(rows, unknowns);
  Vector rhs = Vector::Zero(rows);
  const double root_beta = std::sqrt(beta);
  const Vector& y = pair.y();

  // Frobenius block: rows (p, q) of R H' R against R H R.
  const Matrix target = r * h.dense() * r;
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      const Eigen::Index row = p * n + q;
      for (Eigen::Index u = 0; u < unknowns; ++u) {
        const auto [i, j] = index[static_cast<std::size_t>(u)];
        double coeff = r(p, i) * r(j, q);
        if (i != j) coeff += r(p, j) * r(i, q);
        a(row, u) = coeff;
      }
      rhs(row) = target(p, q);
    }
  }
  // Secant residual block, scaled by sqrt(beta).
  const Vector rs = r * pair.s();
  for (Eigen::Index p = 0; p < n; ++p) {
    const Eigen::Index row = n * n + p;
    for (Eigen::Index u = 0; u < unknowns; ++u) {
      const auto [i, j] = index[static_cast<std::size_t>(u)];
      double coeff = r(p, i) * y(j);
      if (i != j) coeff += r(p, j) * y(i);
      a(row, u) = root_beta * coeff;
    }
    rhs(row) = root_beta * rs(p);
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(1e-13);
  if (qr.rank() < unknowns) {
    throw Error(ErrorKind::SingularSystem, "penalized QP normal system is rank deficient");
  }
  const Vector sol = qr.solve(rhs);

  Matrix out(n, n);
  for (Eigen::Index u = 0; u < unknowns; ++u) {
    const auto [i, j] = index[static_cast<std::size_t>(u)];
    out(i, j) = sol(u);
    out(j, i) = sol(u);
  }
  return SymMatrix(out);
}

}  // namespace spbfgs
