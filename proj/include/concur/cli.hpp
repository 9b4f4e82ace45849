#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace concur::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kInputError = 2,      // I/O or parse failure
    kNumericError = 3,    // numeric or convergence failure
};

// Runs one command line (without the program name). Text output goes to `out`, diagnostics
// to `err`; files named by --output/--records are written directly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace concur::cli
