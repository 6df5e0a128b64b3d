#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ksspec {

// One invariant: value compared against limit (value <= limit, or value >= limit when lower).
struct CheckResult {
  std::string module;
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool lower = false;
  bool passed = false;
  std::string note;  // exception text when the check could not be evaluated
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  double beta = 0.5;
};

// Every module's invariants; on_result is called as each check finishes.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& opt = {},
                                             const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace ksspec
