#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ctk::cli {

// Runs one ctk invocation; args excludes the program name.
// Returns 0 on success, 1 on a domain or input error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctk::cli
