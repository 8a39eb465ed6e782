// Runs criteria 1..8 and prints one line each; exit status 1 if any fails.
// Optional arguments select criterion ids.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <vector>

#include "affvis/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
  if (ids.empty()) {
    for (int id = 1; id <= affvis::kCriteria; ++id) ids.push_back(id);
  }
  int failed = 0;
  for (int id : ids) {
    try {
      const affvis::CriterionResult r = affvis::run_criterion(id);
      std::printf("criterion %d %s: %s | %s | needs %s | %.1fs\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.measured.c_str(), r.threshold.c_str(), r.seconds);
      failed += r.passed ? 0 : 1;
    } catch (const std::exception& e) {
      std::printf("criterion %d FAIL: error %s\n", id, e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
