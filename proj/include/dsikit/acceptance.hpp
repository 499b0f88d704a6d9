#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dsikit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  bool corrupt_fixture = false;
};

/// Runs criteria 1..10 in order. With corrupt_fixture the fixture check
/// (id 0) fails and nothing else runs.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            std::ostream* progress = nullptr);

std::string format_result(const CriterionResult& r);

}  // namespace dsikit
