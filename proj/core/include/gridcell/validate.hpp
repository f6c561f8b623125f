#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridcell {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;  // threshold the observation was held against
  std::string detail;
};

struct ValidationReport {
  std::string suite;
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
};

/// Suites runnable via the CLI: renewal, palm, cox, cell, graph, estimator.
const std::vector<std::string>& validation_suite_names();

/// Runs one module invariant suite at a fixed seed. Unknown names throw
/// ConfigError. The "all" meta-suite is expanded by the caller.
ValidationReport run_validation_suite(const std::string& suite,
                                      std::uint64_t seed, int threads);

}  // namespace gridcell
