#pragma once

#include <string>
#include <vector>

namespace spectra::cli {

// Dispatches one subcommand. Exit status: 0 success / semantic yes,
// 1 semantic no (unsat, check false, mismatch), 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spectra::cli
