#pragma once

#include <iosfwd>

namespace uniharm::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,        // certified / pass
  kExitNegative = 1,  // not certified, collision, heuristic-only
  kExitInvalid = 2,   // invalid spec, flags or inapplicable basis
  kExitInternal = 3,  // I/O or internal error
};

/// Entry point of the uniharm tool. The report JSON goes to `out`, errors go
/// to `err` as lines "uniharm: error: <code>: <message>".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uniharm::cli
