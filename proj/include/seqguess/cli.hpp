// The seqguess command line.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqguess {

enum ExitCode { kFound = 0, kNoGuess = 1, kUsage = 2, kAbort = 3 };

/// Runs the command line on `args` (without the program name). Terms come
/// from positional arguments, --file, --bfile, or else `in`.
int runCli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
           std::ostream& err);

}  // namespace seqguess
