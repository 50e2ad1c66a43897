#include "spbfgs/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "spbfgs/diagnostics.hpp"
#include "spbfgs/error.hpp"
#include "spbfgs/noise_oracle.hpp"
#include "spbfgs/penalty_policy.hpp"
#include "spbfgs/problems.hpp"
#include "spbfgs/qn_core.hpp"

namespace spbfgs {

namespace {

struct Instance {
  SymMatrix h;
  CurvaturePair pair;
};

Vector gaussian(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

SymMatrix random_spd(Eigen::Index n, Rng& rng) {
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = gaussian(n, rng);
  return SymMatrix(a * a.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n));
}

// s.y bounded away from zero relative to |s||y| keeps W well conditioned.
Instance positive_instance(Eigen::Index n, Rng& rng) {
  for (;;) {
    Vector s = gaussian(n, rng);
    Vector y = gaussian(n, rng);
    if (s.dot(y) < 0.0) y = -y;
    if (s.dot(y) >= 0.1 * s.norm() * y.norm()) return {random_spd(n, rng), CurvaturePair(s, y)};
  }
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  return (a.dense() - b.dense()).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<CheckResult> run_verification(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng = derive_stream(seed, {stable_hash("verify")});
  const Eigen::Index dims[] = {2, 3, 4, 6};
  const double betas[] = {0.1, 1.0, 10.0, 1000.0};

  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Eigen::Index n = dims[i % 4];
      const Instance inst = positive_instance(n, rng);
      const double beta = betas[(i / 4) % 4];
      const SymMatrix closed = spbfgs_update(
          inst.h, inst.pair, compute_penalty_scalars(inst.pair, PenaltyParameter::finite(beta)));
      for (double c : {1.0, 7.5}) {
        const SymMatrix w = make_weight_matrix(inst.pair, c);
        worst = std::max(worst, max_abs_diff(closed, oracle_penalized_qp(inst.h, inst.pair, beta, w)));
      }
    }
    out.push_back({"closed form matches penalized QP oracle", worst <= 1e-8,
                   fmt("max |diff| = %.3e", worst)});
  }

  {
    double worst_inf = 0.0;
    bool zero_exact = true;
    for (int i = 0; i < 100; ++i) {
      const Instance inst = positive_instance(dims[i % 4], rng);
      const SymMatrix inf = spbfgs_update(
          inst.h, inst.pair, compute_penalty_scalars(inst.pair, PenaltyParameter::infinite()));
      worst_inf = std::max(worst_inf, max_abs_diff(inf, bfgs_update(inst.h, inst.pair)));
      const SymMatrix zero = spbfgs_update(
          inst.h, inst.pair, compute_penalty_scalars(inst.pair, PenaltyParameter::zero()));
      zero_exact = zero_exact && zero == inst.h;
    }
    out.push_back({"beta limits reproduce BFGS and identity", worst_inf <= 1e-12 && zero_exact,
                   fmt("beta=inf max |diff| = %.3e", worst_inf)});
  }

  {
    int mismatches = 0;
    int failing = 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const Eigen::Index n = dims[i % 4];
      const SymMatrix h = random_spd(n, rng);
      const Vector s = gaussian(n, rng);
      const Vector y = gaussian(n, rng);
      const CurvaturePair pair(s, y);
      const double sty = pair.sty();
      if (std::abs(sty) < 1e-3) continue;
      // Place beta on either side of the boundary -1/(s.y) with a margin.
      double beta = std::pow(10.0, -2.0 + 4.0 * unit(rng));
      if (sty < 0.0) {
        const double edge = -1.0 / sty;
        beta = i % 2 ? edge * (0.1 + 0.85 * unit(rng)) : edge * (1.15 + 5.0 * unit(rng));
      }
      const PenaltyParameter b = PenaltyParameter::finite(beta);
      const bool ok = spbfgs_curvature_ok(pair, b);
      failing += ok ? 0 : 1;
      const SymMatrix next = spbfgs_update_unchecked(h, pair, compute_penalty_scalars(pair, b));
      if (is_positive_definite(next) != ok) ++mismatches;
    }
    out.push_back({"positive definite iff curvature condition", mismatches == 0 && failing > 0,
                   std::to_string(mismatches) + " mismatches, " + std::to_string(failing) +
                       " failing instances"});
  }

  {
    double worst_cc = 0.0;
    double worst_bound = -1e300;
    for (int i = 0; i < 1000; ++i) {
      const Instance inst = positive_instance(dims[i % 4], rng);
      const double beta = betas[i % 4];
      const PenaltyScalars sc = compute_penalty_scalars(inst.pair, PenaltyParameter::finite(beta));
      const SymMatrix next = spbfgs_update(inst.h, inst.pair, sc);
      const Vector& y = inst.pair.y();
      const double ys = inst.pair.sty();
      const double lhs = next.quad_form(y);
      const double rhs = (beta * ys / (1.0 + beta * ys)) * ys + inst.h.quad_form(y) / (1.0 + beta * ys);
      worst_cc = std::max(worst_cc, std::abs(lhs - rhs) / std::abs(rhs));

      const SymMatrix b(inst.h.dense().inverse());
      const SymMatrix b_next = spbfgs_inverse_update(b, inst.h, inst.pair, sc);
      worst_bound = std::max(worst_bound, next.trace() - trace_bound_H(inst.h, inst.pair, sc));
      worst_bound = std::max(worst_bound,
                             b_next.trace() - trace_bound_B(b, inst.pair, sc, sc.beta));
    }
    out.push_back({"convex combination identity and trace bounds",
                   worst_cc <= 1e-10 && worst_bound <= 1e-10,
                   fmt("identity rel err %.3e", worst_cc) + fmt(", bound excess %.3e", worst_bound)});
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Instance inst = positive_instance(dims[i % 4], rng);
      const PenaltyScalars sc = compute_penalty_scalars(inst.pair, PenaltyParameter::finite(5.0));
      const SymMatrix b(inst.h.dense().inverse());
      const Matrix prod = spbfgs_inverse_update(b, inst.h, inst.pair, sc).dense() *
                          spbfgs_update(inst.h, inst.pair, sc).dense();
      worst = std::max(worst,
                       (prod - Matrix::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff());
    }
    out.push_back({"inverse update is the inverse of the direct update", worst <= 1e-8,
                   fmt("max |B+ H+ - I| = %.3e", worst)});
  }

  {
    int bad = 0;
    std::uniform_real_distribution<double> unit(1.01, 10.0);
    for (int i = 0; i < 1000; ++i) {
      const Vector s = gaussian(3, rng);
      Vector y = gaussian(3, rng);
      if (s.dot(y) >= 0.0) y = -y;
      const CurvaturePair pair(s, y);
      PenaltyPolicy policy;
      policy.recovery = ShrinkBeta{unit(rng)};
      const auto res = resolve_beta(policy, pair, PenaltyParameter::finite(1e6));
      if (res.action != UpdateAction::Update || !spbfgs_curvature_ok(pair, res.beta)) ++bad;
    }
    out.push_back({"shrink recovery restores the curvature condition", bad == 0,
                   std::to_string(bad) + " failures"});
  }

  {
    std::string worst_name;
    double worst = 0.0;
    std::normal_distribution<double> normal;
    for (const auto& name : problem_names()) {
      const Problem p = make_problem(name);
      for (int t = 0; t < 20; ++t) {
        Vector x = p.x0;
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += normal(rng);
        const double h = 1e-6 * (1.0 + x.norm());
        const Vector fd = finite_diff_grad(p, x, h);
        const Vector g = p.eval_grad(x);
        const double err = (fd - g).norm() / std::max(1.0, g.norm());
        if (err > worst) {
          worst = err;
          worst_name = name;
        }
      }
    }
    out.push_back({"analytic gradients match finite differences", worst <= 1e-5,
                   fmt("worst rel err %.3e", worst) + " (" + worst_name + ")"});
  }
  return out;
}

}  // namespace spbfgs
