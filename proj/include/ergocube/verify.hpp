#pragma once

// Seeded property suites over generated systems. Trial t of a run with
// seed s uses std::mt19937_64(s + t), so any failure can be replayed alone.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergocube/core.hpp"
#include "ergocube/generate.hpp"

namespace ergocube {

struct SuiteResult {
  std::string suite;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;     // one per failure, with the trial seed
  std::vector<std::string> findings;  // reported, never counted as failures
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  Rational bound_constant = 1;
  std::optional<Family> family;  // overrides each suite's default family
  GeneratorLimits limits{};
  std::vector<std::string> suites;  // empty: all
};

struct VerifySummary {
  std::vector<SuiteResult> suites;
  std::vector<std::string> warnings;
  bool ok() const;
};

std::vector<std::string> verify_suite_names();

VerifySummary run_verify(const VerifyConfig& config);

std::string format_summary(const VerifySummary& summary);

}  // namespace ergocube
