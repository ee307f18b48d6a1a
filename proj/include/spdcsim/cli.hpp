#pragma once

namespace spdcsim {

// Subcommands: run, ensemble, sweep, preset <name>, selfcheck.
// Returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace spdcsim
