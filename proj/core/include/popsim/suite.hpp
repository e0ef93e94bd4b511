#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace popsim {

struct SuiteCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteCheck> checks;

  bool passed() const noexcept {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Replace the token rule by a corrupted one that drops the second black
  /// token instead of whitening it. The conservation checks must then fail.
  bool corrupt_token_rule = false;
};

/// Token conservation, clock recurrence and bounds, engine determinism,
/// cover verification, hitting solver and short protocol runs.
SuiteReport run_invariant_suite(const SuiteOptions& options = {});

}  // namespace popsim
