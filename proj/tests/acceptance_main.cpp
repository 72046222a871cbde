// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "vortexspec/acceptance.hpp"

int main(int argc, char** argv) {
  vortex::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  const auto res = vortex::run_acceptance(opt, [&](const vortex::CriterionResult& r) {
    std::printf("%s\n", vortex::format_line(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  });
  std::printf("%zu criteria, %d failed\n", res.size(), failed);
  return failed == 0 ? 0 : 1;
}
