#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace multcover {

// Runs one CLI invocation (arguments without the program name), writing the
// report to `out` and diagnostics to `err`.  Exit codes: 0 success, 2 domain
// errors (bad parameters, out-of-range exponents, budget violations),
// 1 internal failures, 64 usage errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace multcover
