#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pqe {

// Warning sink and progress counters for the long-running operations.
// Warnings are always retained so callers and tests can inspect them;
// `echo` (when set) additionally receives warnings and progress lines,
// normally wired to stderr by the CLI.
struct Diag {
  std::ostream* echo = nullptr;

  std::vector<std::string> warnings;

  std::int64_t pairs_total = 0;
  std::int64_t pairs_done = 0;
  std::int64_t independence_tests = 0;
  std::int64_t edges_adjoined = 0;
  std::int64_t collider_decisions = 0;
  std::int64_t orientation_conflicts = 0;
  std::int64_t structure_warnings = 0;

  void warn(const std::string& msg) {
    warnings.push_back(msg);
    if (echo) *echo << "pqe: warning: " << msg << '\n';
  }

  void progress(const std::string& msg) const {
    if (echo) *echo << "pqe: " << msg << '\n';
  }
};

}  // namespace pqe
