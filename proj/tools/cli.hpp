#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgm::cli {

/// Runs one pgmtool invocation; args excludes the program name. Returns the
/// process exit code: 0 success, 1 runtime or data error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgm::cli
