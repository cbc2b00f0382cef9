#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace essumm::cli {

// Runs one `essumm` invocation. `args` excludes the program name. Returns the process
// exit status: 0 success, 1 usage error, 2 data/format error, 3 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace essumm::cli
