#pragma once

#include <ostream>

namespace valvelab::cli {

/// Parses the command line and runs the selected subcommand; returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace valvelab::cli
