#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perron::cli {

enum ExitCode : int { ok = 0, input_error = 1, numerical_failure = 2, infeasible = 3 };

/// Runs one CLI invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace perron::cli
