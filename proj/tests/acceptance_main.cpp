// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.
#include <cstdlib>
#include <iostream>
#include <string>

#include "dsikit/acceptance.hpp"

int main(int argc, char** argv) {
  dsikit::AcceptanceOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  const auto results = dsikit::run_acceptance(options, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
