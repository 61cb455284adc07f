#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace loggas::cli {

/// Parses `args` (without the program name), runs the subcommand and returns
/// the exit code: 0 success, 1 domain error (or a failing `verify`), 2 usage
/// error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loggas::cli
