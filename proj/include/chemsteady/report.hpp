#ifndef CHEMSTEADY_REPORT_HPP
#define CHEMSTEADY_REPORT_HPP

#include <string>
#include <vector>

namespace chemsteady {

/// Outcome of one structural property check. Checks whose hypotheses do not
/// hold report applicable = false ("skipped"), never a pass.
struct CheckResult {
  std::string name;
  std::string statement;  // the verified property, in plain math terms
  bool applicable = true;
  bool passed = false;
  double worst_violation = 0.0;  // most negative margin seen (0 if none)
  int location = -1;             // node index of the worst violation
  double tolerance = 0.0;

  static CheckResult skipped(std::string name, std::string statement) {
    CheckResult r;
    r.name = std::move(name);
    r.statement = std::move(statement);
    r.applicable = false;
    r.passed = false;
    return r;
  }
};

struct CheckReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.applicable && !c.passed) return false;
    return true;
  }
};

}  // namespace chemsteady

#endif  // CHEMSTEADY_REPORT_HPP
