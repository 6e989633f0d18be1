#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fiipnn::cli {

enum ExitCode : int {
    exit_pass = 0,
    exit_fail = 2,
    exit_usage = 64,
    exit_input = 66,
    exit_numerical = 70,
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fiipnn::cli
