#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sdsieve {

// Runs the command-line tool. Data rows go to `out` (or the --out file); the
// run report goes to `err`. Returns the process exit code: 0 success, 2
// invalid configuration, 3 guarded-resource exhaustion.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdsieve
