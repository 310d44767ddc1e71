#pragma once

namespace nslab {

/// Top-level command line: simulate, analyze, harmonics, blowup, ensemble,
/// verify. Returns the process exit code (0 ok, 1 numerical/runtime failure,
/// 2 usage error).
int cli_main(int argc, const char* const* argv);

}  // namespace nslab
