#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace guessvi {

/// Command-line front end. args excludes the program name. Returns the
/// process exit code: 0 success, 2 solve did not converge (timeout, update
/// budget or stall), 1 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace guessvi
