#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace clab {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<std::string> acceptance_ids();

// Run the acceptance criteria (all, or the listed ids). Each result carries
// the measured values behind the verdict.
std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only, int workers);

// Table printer + exit code: 0 all pass, 1 otherwise.
int acceptance_report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace clab
