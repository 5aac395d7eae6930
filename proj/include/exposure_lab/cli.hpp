// cli.hpp
// Command-line front end. Every subcommand builds one result envelope and writes it to
// --out (CSV or JSON, picked by --format or the file extension) or to stdout.
//
// Exit codes: 0 success, 1 usage error, 2 invalid state or parameters,
// 3 numerical failure, I/O error or a failed verification.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace exposure_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitFailure = 3;

/// args excludes the program name. Without --out the data goes to `out` and the one-line
/// summary to `err`; with --out the summary goes to `out`. Errors always go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace exposure_lab::cli
