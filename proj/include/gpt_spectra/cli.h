#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gpt_spectra {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfig = 2;

/// Runs one command line (without the program name). Reports go to the
/// --output file when given and to `out` otherwise; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpt_spectra
