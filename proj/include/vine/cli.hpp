#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vine::cli {

/// Entry point of the `vine` tool.
int run(int argc, char** argv);

/// Same as run(), with explicit arguments (program name excluded) and streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vine::cli
