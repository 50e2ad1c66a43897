#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spbfgs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomized identity and oracle checks on the update formulas plus the
/// gradient checks of the built-in problems. Deterministic in `seed`.
std::vector<CheckResult> run_verification(std::uint64_t seed = 20240101);

}  // namespace spbfgs
