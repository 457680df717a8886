#include <cstdlib>
#include <iostream>
#include <string>

#include "nearalg/lab/acceptance.hpp"

// Prints one line per acceptance criterion; exits nonzero when any fails.
// Arguments: optional criterion ids to run.
int main(int argc, char** argv) {
  nearalg::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  const auto results = nearalg::run_acceptance(
      opt, [](const nearalg::CriterionResult& r) { std::cout << nearalg::format_line(r) << std::endl; });
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
