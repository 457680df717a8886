#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nearalg {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  /// Run only these criteria; empty runs all.
  std::vector<int> only;
};

/// Runs acceptance criteria 1 to 11 in order; on_result sees each as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 3 exact diagonals: ..." with the elapsed time against the budget.
std::string format_line(const CriterionResult& r);

}  // namespace nearalg
