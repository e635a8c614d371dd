#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tg {

// Exit codes: 0 success, 1 a verification check failed, 2 usage error, 3 numeric failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tg
