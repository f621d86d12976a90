#pragma once

// Command-line front end. Subcommands: encode, decode, simulate, bench.

#include <iosfwd>
#include <string>
#include <vector>

namespace rmfec {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,        // unreadable input, unwritable output, bad file format
  kExitDecodeFailed = 3,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmfec
