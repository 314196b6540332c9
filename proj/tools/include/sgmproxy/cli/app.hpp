#pragma once

#include <iosfwd>

namespace sgmproxy::cli {

/// Parses argv (subcommands distill, eval, loss, synth plus an optional
/// --config file) and runs the selected command. Returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgmproxy::cli
