#pragma once

namespace qcomp::cli {

/// Parses the command line, runs the selected subcommand and returns the
/// process exit code (0 ok, 2 usage or validation error, 3 invariant
/// violation).
int run(int argc, char** argv);

}  // namespace qcomp::cli
