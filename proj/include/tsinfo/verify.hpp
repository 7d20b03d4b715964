#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tsinfo::verify {

/// Outcome of one verification suite. `artifact_csv` is a deterministic
/// per-case table; `detail` is a one-line deterministic summary. Nothing
/// here depends on wall-clock time or the filesystem.
struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  std::string artifact_csv;
};

/// Names of all suites, in execution order.
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, std::uint64_t seed);
std::vector<SuiteResult> run_all(std::uint64_t seed);

}  // namespace tsinfo::verify
