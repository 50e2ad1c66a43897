#include "spbfgs/noise_oracle.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

#include "spbfgs/error.hpp"

namespace spbfgs {

void NoiseSpec::validate() const {
  if (!(eps_f >= 0.0) || !std::isfinite(eps_f) || !(eps_g >= 0.0) || !std::isfinite(eps_g)) {
    throw Error(ErrorKind::ConfigError, "noise levels must be finite and >= 0");
  }
}

Vector sample_ball(Eigen::Index n, double radius, Rng& rng) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw Error(ErrorKind::DegenerateInput, "ball radius must be finite and >= 0");
  if (radius == 0.0) return Vector::Zero(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector dir(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) dir(i) = normal(rng);
    norm = dir.norm();
  } while (norm == 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
  Vector out = dir * (r / norm);
  // Rounding can push |out| a hair past the radius.
  const double len = out.norm();
  if (len > radius) out *= radius / len;
  return out;
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Rng derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * keys.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master_seed);
  for (auto k : keys) push(k);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

NoisyOracle::NoisyOracle(std::shared_ptr<const Problem> problem, NoiseSpec spec)
    : NoisyOracle(problem, spec, derive_stream(spec.seed, {})) {}

NoisyOracle::NoisyOracle(std::shared_ptr<const Problem> problem, NoiseSpec spec, Rng stream)
    : problem_(std::move(problem)),
      spec_(spec),
      rng_(std::move(stream)),
      best_true_f_(std::numeric_limits<double>::infinity()) {
  spec_.validate();
}

double NoisyOracle::noisy_f(const Vector& x) {
  if (x.size() != problem_->n) throw Error(ErrorKind::BadDimension, "point dimension mismatch");
  const double phi = problem_->eval_f(x);
  if (!std::isfinite(phi)) throw Error(ErrorKind::NonFinite, "phi(x) is not finite");
  ++f_evals_;
  best_true_f_ = std::min(best_true_f_, phi);
  if (spec_.eps_f == 0.0) return phi;
  const double u = spec_.eps_f * unit_(rng_);
  assert(std::abs(u) <= spec_.eps_f);
  max_f_noise_ = std::max(max_f_noise_, std::abs(u));
  return phi + u;
}

namespace {
Vector noisy_g_impl(const Problem& p, const Vector& x) {
  Vector g = p.eval_grad(x);
  if (!all_finite(g)) throw Error(ErrorKind::NonFinite, "grad phi(x) is not finite");
  return g;
}

}  // namespace

Vector NoisyOracle::noisy_g(const Vector& x) {
  if (x.size() != problem_->n) throw Error(ErrorKind::BadDimension, "point dimension mismatch");
  Vector g = noisy_g_impl(*problem_, x);
  ++g_evals_;
  if (spec_.eps_g == 0.0) return g;
  const Vector e = sample_ball(x.size(), spec_.eps_g, rng_);
  assert(e.norm() <= spec_.eps_g);
  max_g_noise_ = std::max(max_g_noise_, e.norm());
  return g + e;
}

}  // namespace spbfgs
