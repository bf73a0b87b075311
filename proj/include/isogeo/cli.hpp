#pragma once

#include <ostream>

namespace isogeo::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kIoFailure = 1;
inline constexpr int kDomainFailure = 2;

/// Runs the command-line front end. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isogeo::cli
