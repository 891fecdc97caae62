#pragma once

#include <iosfwd>

namespace msp {

/// Exit codes: 0 success, 1 infeasible or false decision, 2 usage, schema or
/// I/O problem, 3 premise violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace msp
