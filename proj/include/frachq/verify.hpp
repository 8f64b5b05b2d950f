#pragma once

// Built-in invariant suites, run by `frachq verify`.

#include <functional>
#include <string>
#include <vector>

namespace frachq {

enum class VerifyLevel { quick, full };

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;   // worst observed deviation
  double tolerance = 0.0;
  std::string detail;      // set when a check threw instead of finishing
};

/// quick: kernel normalization, Laplace identity at t = 1, qubit oracle.
/// full: adds the remaining kernel, spectral and model invariants.
/// on_result, if set, is called as each check finishes.
std::vector<CheckResult> run_verify(
    VerifyLevel level, const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace frachq
