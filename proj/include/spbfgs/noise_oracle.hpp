#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string_view>

#include "spbfgs/linalg.hpp"
#include "spbfgs/problems.hpp"

namespace spbfgs {

/// Additive bounded noise: |f - phi| <= eps_f, |g - grad phi|_2 <= eps_g.
struct NoiseSpec {
  double eps_f = 0.0;
  double eps_g = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

using Rng = std::mt19937_64;

/// Uniform sample from the closed n-ball of the given radius: a Gaussian
/// direction scaled to radius * U^(1/n).
Vector sample_ball(Eigen::Index n, double radius, Rng& rng);

/// Independent stream for one replicate, keyed by the master seed and a
/// list of identifiers (problem, method, noise cell, replicate, ...).
Rng derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys);

/// Stable 64-bit FNV-1a hash, used to key streams by name.
std::uint64_t stable_hash(std::string_view text);

/// Noisy function/gradient evaluator. Single owner: it carries the random
/// stream and the evaluation counters.
///
/// It also records the true phi at every point passed to noisy_f. That
/// side channel feeds metrics only and is never seen by the optimizer.
class NoisyOracle {
 public:
  NoisyOracle(std::shared_ptr<const Problem> problem, NoiseSpec spec);
  NoisyOracle(std::shared_ptr<const Problem> problem, NoiseSpec spec, Rng stream);

  /// phi(x) + u, u ~ Uniform[-eps_f, eps_f]. Counts one function evaluation.
  double noisy_f(const Vector& x);
  /// grad phi(x) + e, e uniform on the eps_g ball. Counts one gradient evaluation.
  Vector noisy_g(const Vector& x);

  const Problem& problem() const { return *problem_; }
  const NoiseSpec& spec() const { return spec_; }

  long f_evals() const { return f_evals_; }
  long g_evals() const { return g_evals_; }
  /// Smallest true phi over all noisy_f points so far (+inf before any).
  double best_true_f() const { return best_true_f_; }
  /// Largest |perturbation| emitted so far, for bound checks.
  double max_f_noise() const { return max_f_noise_; }
  double max_g_noise() const { return max_g_noise_; }

 private:
  std::shared_ptr<const Problem> problem_;
  NoiseSpec spec_;
  Rng rng_;
  std::uniform_real_distribution<double> unit_{-1.0, 1.0};
  long f_evals_ = 0;
  long g_evals_ = 0;
  double best_true_f_;
  double max_f_noise_ = 0.0;
  double max_g_noise_ = 0.0;
};

}  // namespace spbfgs
