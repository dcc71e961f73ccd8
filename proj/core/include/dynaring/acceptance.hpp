#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynaring {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the full verification suite at desk scale, printing one pass/fail
// line per criterion to `log`. `golden_path` names the committed expected
// trace for the fixed 4-node reference run.
std::vector<CriterionResult> run_acceptance(const std::string& golden_path, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace dynaring
