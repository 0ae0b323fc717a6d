#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densitylab/density.hpp"

namespace densitylab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Named bundles: "paper-values", "invariants", "oracle", or "acceptance"
// (everything). The quick flag trims sample counts for unit-test use.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, bool quick = false);

// The ten acceptance criteria, in order.
std::vector<CheckResult> acceptance_criteria(std::uint64_t seed, bool quick = false);

// Consistency of a catalogued rule's computed densities against its expected
// verdicts (drives the expected-check command).
std::vector<CheckResult> check_expected(const std::string& rule_spec, std::uint64_t seed);

}  // namespace densitylab
