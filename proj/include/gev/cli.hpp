#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gev::cli {

// Exit codes: 0 success, 1 internal error, 2 configuration or domain error,
// 3 numerical quality error (including a failed verify suite).
int run(int argc, char** argv);

// Same with explicit streams; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gev::cli
