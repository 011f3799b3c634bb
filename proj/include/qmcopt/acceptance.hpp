#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmcopt {

// One verification criterion from the release checklist. Each criterion is a
// self-contained experiment with pinned seeds and tolerances; `detail` holds
// the measured numbers so a failure can be diagnosed from the log alone.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

// Criterion ids (1-based) and their short names, in execution order.
const std::vector<std::pair<int, std::string>>& acceptance_criteria();

// Runs a single criterion. Throws std::out_of_range for an unknown id;
// everything else (including internal exceptions) is reported as a failure.
CriterionResult run_criterion(int id);

// Runs the given criteria (all of them when `ids` is empty), printing one
// PASS/FAIL line per criterion to `os`. Returns the number of failures.
int run_acceptance(const std::vector<int>& ids, std::ostream& os);

}  // namespace qmcopt
