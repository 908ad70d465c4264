#pragma once

namespace pqe {

// Entry point behind the pqe binary: index, learn, expand, search, eval and
// experiment subcommands. Returns the process exit status.
int run_cli(int argc, const char* const* argv);

}  // namespace pqe
