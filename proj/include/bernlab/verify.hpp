#pragma once

#include <string>
#include <vector>

namespace bernlab::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Run the module invariant suite. Quick mode trims corpus sizes; the full
/// suite is what `bernlab verify` executes.
std::vector<CheckResult> run_all(bool quick);

int exit_code(const std::vector<CheckResult>& results);

}  // namespace bernlab::verify
