#pragma once

#include <iosfwd>

namespace nslab {

/// Runs the built-in fast invariant suite and prints one line per check.
/// Returns the number of failed checks.
int run_verify(std::ostream& out);

}  // namespace nslab
