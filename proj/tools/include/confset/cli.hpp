#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confset::cli {

constexpr unsigned kDefaultMaxRadius = 12;

enum ExitCode : int { Success = 0, DomainFailure = 1, ParseFailure = 2 };

/// Runs one command line (without the program name). Worker count comes from
/// CONFSET_WORKERS when set.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confset::cli
