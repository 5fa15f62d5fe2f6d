#pragma once

namespace curvlab::cli {

// Parses argv and dispatches to one subcommand. Exit conventions: 0 for
// success or PASS verdicts, 1 for FAIL verdicts, 2 for usage or input
// errors.
int run(int argc, const char* const* argv);

}  // namespace curvlab::cli
