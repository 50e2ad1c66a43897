#include "spbfgs/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "spbfgs/error.hpp"

namespace spbfgs {

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix householder(const Vector& v) {
  const Eigen::Index n = v.size();
  return Matrix::Identity(n, n) - 2.0 * v * v.transpose() / v.squaredNorm();
}

void check_dim(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::BadDimension, what);
}

}  // namespace

Problem quadratic_ill() {
  // Fixed reflection vectors; any choice works as long as it never changes.
  const Matrix q = householder(vec({1.0, -2.0, 0.5, 1.5})) *
                   householder(vec({0.3, 1.0, -1.2, 0.7})) *
                   householder(vec({-0.8, 0.4, 1.1, 2.0}));
  const Vector spectrum = vec({1e-2, 1.0, 1e2, 1e4});
  const SymMatrix t(q * spectrum.asDiagonal() * q.transpose());

  Problem p;
  p.name = "QUADRATIC_ILL";
  p.n = 4;
  p.eval_f = [t](const Vector& x) { return 0.5 * t.quad_form(x); };
  p.eval_grad = [t](const Vector& x) -> Vector { return t * x; };
  p.eval_hess = [t](const Vector&) { return t; };
  p.x0 = Vector::Constant(4, 1e5);
  p.phi_star = 0.0;
  p.argmin = Vector::Zero(4);
  p.convexity = StrongConvexity{1e-2, 1e4};
  return p;
}

Problem quadratic_1d() {
  Problem p;
  p.name = "QUADRATIC_1D";
  p.n = 1;
  p.eval_f = [](const Vector& x) { return x(0) * x(0); };
  p.eval_grad = [](const Vector& x) -> Vector { return 2.0 * x; };
  p.eval_hess = [](const Vector&) { return SymMatrix(Matrix::Constant(1, 1, 2.0)); };
  p.x0 = vec({1.0});
  p.argmin = Vector::Zero(1);
  p.convexity = StrongConvexity{2.0, 2.0};
  return p;
}

Problem rosenbrock() {
  Problem p;
  p.name = "ROSENBR";
  p.n = 2;
  p.eval_f = [](const Vector& x) {
    const double a = 1.0 - x(0);
    const double b = x(1) - x(0) * x(0);
    return a * a + 100.0 * b * b;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    const double b = x(1) - x(0) * x(0);
    return vec({-2.0 * (1.0 - x(0)) - 400.0 * x(0) * b, 200.0 * b});
  };
  p.eval_hess = [](const Vector& x) {
    Matrix h(2, 2);
    h(0, 0) = 2.0 - 400.0 * (x(1) - 3.0 * x(0) * x(0));
    h(0, 1) = h(1, 0) = -400.0 * x(0);
    h(1, 1) = 200.0;
    return SymMatrix(h);
  };
  p.x0 = vec({-1.2, 1.0});
  p.argmin = vec({1.0, 1.0});
  return p;
}

Problem srosenbr(Eigen::Index n) {
  check_dim(n >= 2 && n % 2 == 0, "SROSENBR needs an even dimension");
  Problem p;
  p.name = "SROSENBR";
  p.n = n;
  p.eval_f = [](const Vector& x) {
    double f = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
      const double a = 1.0 - x(i);
      const double b = x(i + 1) - x(i) * x(i);
      f += a * a + 100.0 * b * b;
    }
    return f;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    Vector g(x.size());
    for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
      const double b = x(i + 1) - x(i) * x(i);
      g(i) = -2.0 * (1.0 - x(i)) - 400.0 * x(i) * b;
      g(i + 1) = 200.0 * b;
    }
    return g;
  };
  p.x0.resize(n);
  for (Eigen::Index i = 0; i < n; i += 2) {
    p.x0(i) = -1.2;
    p.x0(i + 1) = 1.0;
  }
  p.argmin = Vector::Ones(n);
  return p;
}

Problem beale() {
  static constexpr double c[3] = {1.5, 2.25, 2.625};
  Problem p;
  p.name = "BEALE";
  p.n = 2;
  p.eval_f = [](const Vector& x) {
    double f = 0.0;
    double ypow = 1.0;
    for (int i = 0; i < 3; ++i) {
      ypow *= x(1);
      const double r = c[i] - x(0) * (1.0 - ypow);
      f += r * r;
    }
    return f;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    Vector g = Vector::Zero(2);
    double ypow = 1.0;  // x2^(i)
    for (int i = 0; i < 3; ++i) {
      const double dpow = (i + 1) * ypow;  // d/dx2 of x2^(i+1)
      ypow *= x(1);
      const double r = c[i] - x(0) * (1.0 - ypow);
      g(0) += 2.0 * r * -(1.0 - ypow);
      g(1) += 2.0 * r * x(0) * dpow;
    }
    return g;
  };
  p.x0 = vec({1.0, 1.0});
  p.argmin = vec({3.0, 0.5});
  return p;
}

Problem cube() {
  Problem p;
  p.name = "CUBE";
  p.n = 2;
  p.eval_f = [](const Vector& x) {
    const double a = x(0) - 1.0;
    const double b = x(1) - x(0) * x(0) * x(0);
    return a * a + 100.0 * b * b;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    const double b = x(1) - x(0) * x(0) * x(0);
    return vec({2.0 * (x(0) - 1.0) - 600.0 * x(0) * x(0) * b, 200.0 * b});
  };
  p.x0 = vec({-1.2, 1.0});
  p.argmin = vec({1.0, 1.0});
  return p;
}

Problem powellsg(Eigen::Index n) {
  check_dim(n >= 4 && n % 4 == 0, "POWELLSG needs a dimension divisible by 4");
  Problem p;
  p.name = "POWELLSG";
  p.n = n;
  p.eval_f = [](const Vector& x) {
    double f = 0.0;
    for (Eigen::Index i = 0; i + 3 < x.size(); i += 4) {
      const double a = x(i) + 10.0 * x(i + 1);
      const double b = x(i + 2) - x(i + 3);
      const double c = x(i + 1) - 2.0 * x(i + 2);
      const double d = x(i) - x(i + 3);
      f += a * a + 5.0 * b * b + std::pow(c, 4) + 10.0 * std::pow(d, 4);
    }
    return f;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    Vector g(x.size());
    for (Eigen::Index i = 0; i + 3 < x.size(); i += 4) {
      const double a = x(i) + 10.0 * x(i + 1);
      const double b = x(i + 2) - x(i + 3);
      const double c = x(i + 1) - 2.0 * x(i + 2);
      const double d = x(i) - x(i + 3);
      const double c3 = 4.0 * c * c * c;
      const double d3 = 40.0 * d * d * d;
      g(i) = 2.0 * a + d3;
      g(i + 1) = 20.0 * a + c3;
      g(i + 2) = 10.0 * b - 2.0 * c3;
      g(i + 3) = -10.0 * b - d3;
    }
    return g;
  };
  p.x0.resize(n);
  for (Eigen::Index i = 0; i < n; i += 4) {
    p.x0.segment(i, 4) = vec({3.0, -1.0, 0.0, 1.0});
  }
  p.argmin = Vector::Zero(n);
  return p;
}

Problem helix() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // Classical angle: arctan(x2/x1)/(2 pi), shifted by 1/2 for x1 < 0.
  auto theta = [two_pi](const Vector& x) {
    const double t = std::atan(x(1) / x(0)) / two_pi;
    return x(0) < 0.0 ? t + 0.5 : t;
  };
  Problem p;
  p.name = "HELIX";
  p.n = 3;
  p.eval_f = [theta](const Vector& x) {
    const double r = std::hypot(x(0), x(1));
    const double a = x(2) - 10.0 * theta(x);
    const double b = r - 1.0;
    return 100.0 * (a * a + b * b) + x(2) * x(2);
  };
  p.eval_grad = [theta, two_pi](const Vector& x) -> Vector {
    const double r2 = x(0) * x(0) + x(1) * x(1);
    const double r = std::sqrt(r2);
    const double a = x(2) - 10.0 * theta(x);
    const double b = r - 1.0;
    const double dt0 = -x(1) / (two_pi * r2);
    const double dt1 = x(0) / (two_pi * r2);
    return vec({200.0 * (a * -10.0 * dt0 + b * x(0) / r),
                200.0 * (a * -10.0 * dt1 + b * x(1) / r), 200.0 * a + 2.0 * x(2)});
  };
  p.x0 = vec({-1.0, 0.0, 0.0});
  p.argmin = vec({1.0, 0.0, 0.0});
  return p;
}

Problem box3() {
  Problem p;
  p.name = "BOX3";
  p.n = 3;
  p.eval_f = [](const Vector& x) {
    double f = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double t = 0.1 * i;
      const double r = std::exp(-t * x(0)) - std::exp(-t * x(1)) -
                       x(2) * (std::exp(-t) - std::exp(-10.0 * t));
      f += r * r;
    }
    return f;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    Vector g = Vector::Zero(3);
    for (int i = 1; i <= 10; ++i) {
      const double t = 0.1 * i;
      const double e0 = std::exp(-t * x(0));
      const double e1 = std::exp(-t * x(1));
      const double c = std::exp(-t) - std::exp(-10.0 * t);
      const double r = e0 - e1 - x(2) * c;
      g(0) += 2.0 * r * (-t * e0);
      g(1) += 2.0 * r * (t * e1);
      g(2) += 2.0 * r * (-c);
    }
    return g;
  };
  p.x0 = vec({0.0, 10.0, 20.0});
  p.argmin = vec({1.0, 10.0, 1.0});
  return p;
}

Problem genrose(Eigen::Index n) {
  check_dim(n >= 2, "GENROSE needs n >= 2");
  Problem p;
  p.name = "GENROSE";
  p.n = n;
  p.eval_f = [](const Vector& x) {
    double f = 1.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double a = x(i) - x(i - 1) * x(i - 1);
      const double b = x(i) - 1.0;
      f += 100.0 * a * a + b * b;
    }
    return f;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    Vector g = Vector::Zero(x.size());
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double a = x(i) - x(i - 1) * x(i - 1);
      g(i) += 200.0 * a + 2.0 * (x(i) - 1.0);
      g(i - 1) += -400.0 * a * x(i - 1);
    }
    return g;
  };
  p.x0.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) p.x0(i) = static_cast<double>(i + 1) / (n + 1);
  p.phi_star = 1.0;
  p.argmin = Vector::Ones(n);
  return p;
}

Problem extrosnb(Eigen::Index n) {
  check_dim(n >= 2, "EXTROSNB needs n >= 2");
  Problem p;
  p.name = "EXTROSNB";
  p.n = n;
  p.eval_f = [](const Vector& x) {
    double f = (x(0) - 1.0) * (x(0) - 1.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double a = x(i) - x(i - 1) * x(i - 1);
      f += 100.0 * a * a;
    }
    return f;
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    Vector g = Vector::Zero(x.size());
    g(0) = 2.0 * (x(0) - 1.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double a = x(i) - x(i - 1) * x(i - 1);
      g(i) += 200.0 * a;
      g(i - 1) += -400.0 * a * x(i - 1);
    }
    return g;
  };
  p.x0 = Vector::Constant(n, -1.0);
  p.argmin = Vector::Ones(n);
  return p;
}

Problem sineval() {
  Problem p;
  p.name = "SINEVAL";
  p.n = 2;
  p.eval_f = [](const Vector& x) {
    const double a = x(1) - std::sin(x(0));
    return 1e4 * a * a + 0.25 * x(0) * x(0);
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    const double a = x(1) - std::sin(x(0));
    return vec({-2e4 * a * std::cos(x(0)) + 0.5 * x(0), 2e4 * a});
  };
  p.x0 = vec({4.712389, -1.0});
  p.argmin = vec({0.0, 0.0});
  return p;
}

Problem snail() {
  // Spiralling valley between levels clow = 1 and cup = 2.
  constexpr double clow = 1.0;
  constexpr double cup = 2.0;
  constexpr double half_sum = 0.5 * (cup + clow);
  constexpr double half_diff = 0.5 * (cup - clow);
  Problem p;
  p.name = "SNAIL";
  p.n = 2;
  p.eval_f = [](const Vector& x) {
    const double r2 = x(0) * x(0) + x(1) * x(1);
    const double r = std::sqrt(r2);
    const double th = std::atan2(x(1), x(0));
    return r2 / (1.0 + r2) * (half_sum - half_diff * std::cos(r - th));
  };
  p.eval_grad = [](const Vector& x) -> Vector {
    const double r2 = x(0) * x(0) + x(1) * x(1);
    if (r2 == 0.0) return Vector::Zero(2);
    const double r = std::sqrt(r2);
    const double th = std::atan2(x(1), x(0));
    const double u = r2 / (1.0 + r2);
    const double v = half_sum - half_diff * std::cos(r - th);
    const double dv_darg = half_diff * std::sin(r - th);  // dv/d(r - th)
    // du/dx = 2x/(1+r2)^2; d(r - th)/dx = x/r + (x2, -x1)/r2 componentwise.
    const double du = 2.0 / ((1.0 + r2) * (1.0 + r2));
    const double da0 = x(0) / r + x(1) / r2;
    const double da1 = x(1) / r - x(0) / r2;
    return vec({du * x(0) * v + u * dv_darg * da0, du * x(1) * v + u * dv_darg * da1});
  };
  p.x0 = vec({10.0, 10.0});
  p.argmin = vec({0.0, 0.0});
  return p;
}

std::vector<std::string> problem_names() {
  return {"QUADRATIC_ILL", "QUADRATIC_1D", "ROSENBR", "SROSENBR", "BEALE",
          "CUBE",          "POWELLSG",     "HELIX",   "BOX3",     "GENROSE",
          "EXTROSNB",      "SINEVAL",      "SNAIL"};
}

std::vector<std::string> benchmark_suite() {
  return {"ROSENBR", "SROSENBR", "BEALE",    "CUBE",    "POWELLSG", "HELIX",
          "BOX3",    "GENROSE",  "EXTROSNB", "SINEVAL", "SNAIL"};
}

Problem make_problem(const std::string& name, std::optional<Eigen::Index> n) {
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (key == "QUADRATIC_ILL") return quadratic_ill();
  if (key == "QUADRATIC_1D") return quadratic_1d();
  if (key == "ROSENBR" || key == "ROSENBROCK") return rosenbrock();
  if (key == "SROSENBR") return srosenbr(n.value_or(10));
  if (key == "BEALE") return beale();
  if (key == "CUBE") return cube();
  if (key == "POWELLSG") return powellsg(n.value_or(4));
  if (key == "HELIX") return helix();
  if (key == "BOX3") return box3();
  if (key == "GENROSE") return genrose(n.value_or(5));
  if (key == "EXTROSNB") return extrosnb(n.value_or(10));
  if (key == "SINEVAL") return sineval();
  if (key == "SNAIL") return snail();
  throw Error(ErrorKind::BadDimension, "unknown problem '" + name + "'");
}

Vector finite_diff_grad(const Problem& problem, const Vector& x, double h) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    xp(i) = xi + h;
    const double fp = problem.eval_f(xp);
    xp(i) = xi - h;
    const double fm = problem.eval_f(xp);
    xp(i) = xi;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace spbfgs
