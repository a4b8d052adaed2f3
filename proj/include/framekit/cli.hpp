#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace framekit {

// Exit codes: 0 check passed / command succeeded, 1 check failed, 2 usage or
// input error. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace framekit
