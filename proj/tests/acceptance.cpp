// Runs criteria 1-9 and prints one line per criterion. Exit status 1 when any fails.

#include <cstdio>
#include <exception>

#include "cgk/acceptance.hpp"

int main() {
  try {
    bool all = true;
    cgk::run_acceptance({}, [&](const cgk::CriterionResult& r) {
      std::printf("%s\n", cgk::format_line(r).c_str());
      std::fflush(stdout);
      all = all && r.passed;
    });
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 2;
  }
}
