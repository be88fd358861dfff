#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hgf::cli {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 constraint or input error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hgf::cli
