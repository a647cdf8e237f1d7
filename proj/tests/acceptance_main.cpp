// Acceptance runner: executes every suite criterion at its pinned tolerance
// and prints one pass/fail line per criterion. Exit status is nonzero when
// any criterion fails.
#include <iostream>

#include "capri/suite.hpp"

int main(int argc, char** argv) {
  capri::SuiteOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  std::vector<capri::RunReport> reports;
  auto results = capri::run_suite(opt, std::cout, &reports);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  std::cout << (all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}
