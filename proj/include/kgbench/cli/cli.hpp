#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgbench::cli {

// Runs one command line (args[0] is the program name). Returns the process
// exit code: 0 on success, 1 on any error, with the message on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgbench::cli
