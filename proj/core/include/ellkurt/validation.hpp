#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ellkurt {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  bool quick = false;
  std::uint64_t seed = 7;
};

/// Monte Carlo agreement of the sphere and elliptical moment formulas.
std::vector<CheckResult> validate_moments(const ValidationOptions& opts);

/// Differential test of the fast U-statistics against the quadruple loop.
std::vector<CheckResult> validate_ustat(const ValidationOptions& opts);

}  // namespace ellkurt
