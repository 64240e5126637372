#pragma once

#include <functional>
#include <string>
#include <vector>

namespace gefhole::checks {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  double value = 0.0;      // headline measurement
  double threshold = 0.0;  // what value was compared against
  std::string detail;
  double seconds = 0.0;
};

struct Check {
  std::string id;
  std::string name;
  std::function<CheckResult()> run;
};

/// Acceptance criteria 1..10 at full scale.
std::vector<Check> acceptance_criteria();

/// Cheap identities and degenerate cases; the whole list runs in well under a minute.
std::vector<Check> trivial_checks();

/// Runs one check, timing it and turning exceptions into failures.
CheckResult run_check(const Check& c);

std::string format_line(const CheckResult& r);

}  // namespace gefhole::checks
