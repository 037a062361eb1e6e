#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdlab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the full acceptance battery, printing one PASS/FAIL line per
// criterion to `out`. Deterministic; every tolerance is pinned in the
// implementation.
std::vector<CriterionResult> run_all(std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace sdlab::acceptance
