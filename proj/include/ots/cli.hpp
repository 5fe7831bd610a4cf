#pragma once

#include <iosfwd>

namespace ots {

/// Runs the `ots` command line. Returns 0 on success, 2 for invalid input or
/// usage, 1 for internal failures. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ots
