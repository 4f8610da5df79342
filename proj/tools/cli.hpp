#pragma once

#include <ostream>

namespace qstar::cli {

enum ExitCode { Success = 0, ValidationFailure = 1, InvariantFailure = 2, IoFailure = 3 };

/// Runs one command line. Human-readable text goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qstar::cli
