#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvtk {

/// Command-line front end. `args` excludes the program name. Returns the
/// process exit status: 0 success, 1 failed verification or runtime error,
/// 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvtk
