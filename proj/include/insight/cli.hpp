#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace insight {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitRemote = 4,
};

/// Entry point behind the `insight` binary. `args` excludes the program name.
/// Machine output goes to `out`; diagnostics go to `err` and the log.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace insight
