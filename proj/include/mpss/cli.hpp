#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpss::cli {

enum ExitCode : int { ok = 0, validation_error = 1, solver_error = 2 };

/// Runs the dea-mpss command line. args excludes the program name. Reports
/// go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mpss::cli
