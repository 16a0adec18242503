#pragma once

#include <iosfwd>

namespace roughstruct {

/// Runs the command line front end. Reports go to out, diagnostics to err.
/// Returns 0 on success, 1 for usage errors and invalid input, 2 for
/// numerical failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roughstruct
