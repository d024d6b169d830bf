#pragma once

#include <iosfwd>

#include "clothgrasp/errors.hpp"

namespace clothgrasp {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNoCandidates = 3,
  kExitIo = 4,
};

int ExitCodeFor(ErrorKind kind);

/// Entry point of the `clothgrasp` tool; subcommands gen, select, detect,
/// bench and overlay. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clothgrasp
