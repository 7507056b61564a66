#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyper3 {

/// Runs the command line `args` (without the program name). Returns 0 on
/// success, 1 when a verdict fails or a tolerance is breached, 2 on a usage
/// error (one-line reason on `err`).
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyper3
