#ifndef DFSIM_CLI_HPP
#define DFSIM_CLI_HPP

#include <ostream>

namespace dfsim {

// Process exit codes. These values are a compatibility contract.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitDeadlock = 2,
    kExitBudget = 3,
    kExitTiming = 4,
    kExitMismatch = 5,
};

// Entry point of the `dfsim` tool, with output streams injectable for tests.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dfsim

#endif  // DFSIM_CLI_HPP
