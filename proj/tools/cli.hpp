#pragma once

#include <iosfwd>

namespace cmcgap::cli {

enum ExitCode : int {
    ok = 0,
    failure = 1,
    config_error = 2,
    truncated = 3,
    gap_violation = 4,
    no_root = 5,
};

/// Entry point of the cmcgap tool. Results go to `out` (or --output), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmcgap::cli
