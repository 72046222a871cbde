#pragma once

#include <functional>
#include <string>
#include <vector>

namespace vortex {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // measured numbers
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> only;  // empty: all criteria 1..11
  int workers = 0;
};

// One line: "PASS  4  scaling laws ... | detail (12.3 s)".
std::string format_line(const CriterionResult& r);

// Runs the criteria in order; on_result is called after each one. A criterion
// that throws is reported as failed with the exception text.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opt = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace vortex
