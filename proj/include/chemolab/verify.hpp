#pragma once

#include <string>
#include <vector>

namespace chemolab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in self checks: elliptic manufactured-solution convergence,
/// discrete mass conservation, and the logistic ODE limit.
std::vector<CheckResult> run_verification_suite();

}  // namespace chemolab
