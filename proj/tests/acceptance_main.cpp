#include <iostream>

#include "dynaring/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string golden =
      argc > 1 ? argv[1] : "tests/data/engine_n4k3_static_h3.golden";
  const auto results = dynaring::run_acceptance(golden, std::cout);
  const bool ok = dynaring::all_passed(results);
  std::cout << (ok ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
  return ok ? 0 : 1;
}
