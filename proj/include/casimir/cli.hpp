#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace casimir::cli {

// Runs one subcommand. Exit codes: 0 success, 1 validation/parse failure,
// 2 quadrature non-convergence, 3 invariant failure from `check`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

} // namespace casimir::cli
