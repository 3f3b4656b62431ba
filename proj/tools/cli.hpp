#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kab::cli {

// Runs one command line (without the program name) and returns the exit
// code: 0 free/accepted, 1 repetition found or rejected, 2 usage or
// precondition error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kab::cli
