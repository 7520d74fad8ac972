#pragma once

#include <iosfwd>

namespace minl::cli {

enum ExitCode : int {
  kOk = 0,
  kSuiteFailed = 1,
  kInvalidInput = 2,
  kDimensionMismatch = 3,
  kUnwritableOutput = 4,
  kUnknownSuite = 5,
};

/// Entry point of the `minl` tool: compute, scan, verify and gen.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minl::cli
