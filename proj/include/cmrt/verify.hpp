#pragma once

#include <string>
#include <vector>

namespace cmrt {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Self-contained validation suites: exact golden-table comparison (with the
/// recorded discrepancy), exact endpoint identities through order 12,
/// series-coefficient equivalence against direct Fourier restriction
/// quadrature, and the flag consistency residual on random smooth flags.
std::vector<CheckResult> run_verification();

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace cmrt
