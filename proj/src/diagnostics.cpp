#include "spbfgs/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "spbfgs/error.hpp"

namespace spbfgs {

void TheoryParams::validate() const {
  if (!(m > 0.0 && m <= big_m)) throw Error(ErrorKind::MissingMetadata, "need 0 < m <= M");
  if (!(psi > 0.0 && psi <= big_psi)) throw Error(ErrorKind::ConfigError, "need 0 < psi <= Psi");
  if (!(eps_g_bar >= 0.0)) throw Error(ErrorKind::ConfigError, "eps_g must be >= 0");
}

double TheoryParams::noise_floor() const {
  const double r = big_psi * eps_g_bar / psi;
  return r * r / (2.0 * m);
}

double trace_bound_H(const SymMatrix& h, const CurvaturePair& pair, const PenaltyScalars& scalars) {
  const double g = scalars.gamma;
  const double ns = pair.s().norm();
  const double lead = 1.0 + g * pair.y().norm() * ns;
  return lead * lead * h.trace() + g * ns * ns;
}

double trace_bound_B(const SymMatrix& b, const CurvaturePair& pair, const PenaltyScalars& scalars,
                     PenaltyParameter beta) {
  const double ys = pair.y().norm() * pair.s().norm();
  double lead = 1.0;
  if (ys != 0.0) lead += beta.value() * ys;
  return lead * b.trace() + scalars.gamma * pair.y().squaredNorm();
}

namespace {

TheoryParams resolved(const Problem& problem, TheoryParams params) {
  if (params.m <= 0.0 && problem.convexity) {
    params.m = problem.convexity->m;
    params.big_m = problem.convexity->big_m;
  }
  if (params.m <= 0.0) throw Error(ErrorKind::MissingMetadata, "strong convexity m is unknown");
  if (params.big_m < params.m) params.big_m = params.m;
  params.validate();
  return params;
}

}  // namespace

bool in_noise_region(const Problem& problem, const Vector& x, const TheoryParams& params) {
  const TheoryParams p = resolved(problem, params);
  return problem.eval_f(x) <= problem.phi_star + p.noise_floor();
}

EnvelopeCheck qlinear_envelope_ok(const RunTrace& trace, const Problem& problem,
                                  const TheoryParams& params, double alpha) {
  const TheoryParams p = resolved(problem, params);
  const double level = problem.phi_star + p.noise_floor();
  const double rate = 1.0 - alpha * p.psi * p.m;

  EnvelopeCheck out;
  const auto& recs = trace.records;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const double phi_k = recs[k].phi;
    const double phi_next = k + 1 < recs.size() ? recs[k + 1].phi : trace.final_phi;
    if (phi_k <= level) {
      ++out.steps_excluded;
      continue;
    }
    ++out.steps_checked;
    const double slack = 1e-12 * std::abs(phi_k);
    if (phi_next - level > rate * (phi_k - level) + slack) {
      ++out.violations;
      out.holds = false;
    }
  }
  return out;
}

double scaled_condition_number(const SymMatrix& h, const SymMatrix& hess) {
  if (h.size() != hess.size()) throw Error(ErrorKind::BadDimension, "matrix sizes differ");
  auto singular = [](const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const Vector& sv = svd.singularValues();
    const double eps = std::numeric_limits<double>::epsilon();
    return sv(sv.size() - 1) <= eps * static_cast<double>(a.rows()) * sv(0);
  };
  if (singular(h.dense()) || singular(hess.dense())) {
    throw Error(ErrorKind::SingularInput, "matrix is numerically singular");
  }
  Eigen::JacobiSVD<Matrix> svd(h.dense() * hess.dense());
  const Vector& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace spbfgs
