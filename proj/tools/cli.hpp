#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxmargin::cli {

// Exit codes: 0 success, 1 checks ran and failed, 2 usage error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutEnv = "MAXMARGIN_OUT";

}  // namespace maxmargin::cli
