#ifndef PCMK_SELFTEST_HPP
#define PCMK_SELFTEST_HPP

#include "pcmk/ktheory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pcmk {

struct SelftestOptions {
  int max_size = 0;  // caps every corpus bound when positive
  std::uint64_t seed = 1;
  StableConstants constants;
  bool parallel = true;
  std::vector<int> only;  // criterion ids; empty runs all
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string expected;
  std::string computed;
  bool pass = false;
  double seconds = 0;
  double limit = 0;  // seconds; 0 is unlimited
  std::vector<std::string> failures;
};

/// The acceptance criteria, sorted by id. Each case is independent of the others.
std::vector<CriterionResult> run_selftest(const SelftestOptions& opts = {});

/// One line per criterion: "PASS  1 name  expected | computed  (0.01 s)".
std::string format_result(const CriterionResult& r);

}  // namespace pcmk

#endif  // PCMK_SELFTEST_HPP
