#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace cleanreg {

// Runs one CLI invocation against injectable streams; returns the exit code
// (0 success, 1 verification failure, 2 usage error).
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace cleanreg
