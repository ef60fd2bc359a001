#pragma once

#include <string>
#include <vector>

namespace surgecast {

// Front end for the surgecast tool. `args` excludes the program name.
// Returns the process exit code: 0 success, 1 usage error, 2 data error,
// 3 numeric error.
int run_cli(std::vector<std::string> args);
int run_cli(int argc, const char* const* argv);

} // namespace surgecast
