#include <iostream>

#include "peglab/verify/acceptance.hpp"

int main() {
  peglab::verify::AcceptanceSuite suite;
  int failed = 0;
  for (const auto& r : suite.run_all()) {
    std::cout << peglab::verify::format_line(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
