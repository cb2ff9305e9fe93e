#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brf {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Validates the pipeline against a closed-form diagonal-Gaussian target:
/// exact-velocity boundary identities, the velocity-to-score conversion,
/// integrator statistics against the known mean and spread, bitwise
/// degeneracies of the stochastic samplers, and distributional agreement
/// between the two curved samplers. Deterministic per seed.
std::vector<CheckResult> run_oracle_checks(std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace brf
