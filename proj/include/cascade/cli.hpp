#pragma once

namespace cascade {

// Parses argv, dispatches one subcommand, writes any outputs.
// Returns the process exit status: 0 success, 1 runtime failure,
// 2 usage error (bad flags, missing files, malformed config).
int run_cli(int argc, char** argv);

}  // namespace cascade
