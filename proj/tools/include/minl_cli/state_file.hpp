#pragma once

#include <iosfwd>
#include <string>

#include "minl/qstate.hpp"

namespace minl::cli {

/// Parses {"dims": [...], "matrix": [[[re, im], ...], ...]} into a validated
/// state. Malformed documents throw ValidationError; a dims/shape mismatch
/// throws DimensionError.
DensityMatrix parse_state(const std::string& text);
DensityMatrix read_state_file(const std::string& path);

/// Full-precision serialization; parse_state(format_state(rho)) reproduces
/// rho bit for bit.
std::string format_state(const DensityMatrix& rho);

}  // namespace minl::cli
