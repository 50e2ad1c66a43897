#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spbfgs/linalg.hpp"

namespace spbfgs {

/// Bounds m I <= Hess(phi) <= M I.
struct StrongConvexity {
  double m = 0.0;
  double big_m = 0.0;
};

/// A smooth test function with its analytic derivatives and metadata.
/// Stateless; safe to evaluate from several threads.
struct Problem {
  std::string name;
  Eigen::Index n = 0;
  std::function<double(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_grad;
  std::function<SymMatrix(const Vector&)> eval_hess;  // empty when not provided
  Vector x0;
  double phi_star = 0.0;
  std::optional<Vector> argmin;
  std::optional<StrongConvexity> convexity;

  bool has_hessian() const { return static_cast<bool>(eval_hess); }
};

/// 4-D quadratic 1/2 x^T T x with spectrum {1e-2, 1, 1e2, 1e4} in a fixed
/// orthogonal basis (product of three Householder reflections), started
/// from 1e5 * (1, 1, 1, 1).
Problem quadratic_ill();

/// phi(x) = x^2 in one dimension, started from 1.
Problem quadratic_1d();

Problem rosenbrock();
Problem srosenbr(Eigen::Index n = 10);
Problem beale();
Problem cube();
Problem powellsg(Eigen::Index n = 4);
Problem helix();
Problem box3();
Problem genrose(Eigen::Index n = 5);
Problem extrosnb(Eigen::Index n = 10);
Problem sineval();
Problem snail();

/// Names accepted by make_problem (upper-case, as in the benchmark tables).
std::vector<std::string> problem_names();

/// The problems compared in the aggregate noisy benchmark (excludes the
/// two quadratics).
std::vector<std::string> benchmark_suite();

/// Case-insensitive lookup. `n` overrides the dimension for the scalable
/// families and is ignored otherwise. Throws BadDimension on unknown names.
Problem make_problem(const std::string& name, std::optional<Eigen::Index> n = std::nullopt);

/// Central differences, one coordinate at a time.
Vector finite_diff_grad(const Problem& problem, const Vector& x, double h);

}  // namespace spbfgs
