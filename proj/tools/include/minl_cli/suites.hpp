#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minl/nonlocality.hpp"

namespace minl::cli {

struct SuiteOptions {
  /// Overrides every check's default sample count.
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  /// dA x dB for the bipartite checks; default mixes several shapes.
  std::optional<Dims> dims;
  OptimizerConfig optimizer;
  std::size_t grid_resolution = 400;
};

struct SuiteFailure {
  std::uint64_t seed = 0;
  std::string check;
  double violation = 0.0;
};

struct CheckSummary {
  std::string name;
  std::string anchor;
  std::size_t samples = 0;
  double tolerance = 0.0;
  /// Largest measured violation; a check fails where it exceeds tolerance.
  double max_violation = 0.0;
  std::size_t failures = 0;
};

struct SuiteReport {
  std::string suite;
  std::size_t samples = 0;
  std::vector<CheckSummary> checks;
  std::vector<SuiteFailure> failures;
  /// Observations reported without being asserted.
  std::vector<std::string> notes;
  double elapsed_seconds = 0.0;

  bool passed() const { return failures.empty(); }
};

class UnknownSuiteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// all, bounds, pinsker, tradeoffs, dilation, invariance, oracle.
const std::vector<std::string>& suite_names();

SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace minl::cli
