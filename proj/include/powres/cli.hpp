#pragma once

#include <iosfwd>

#include "powres/error.hpp"

namespace powres::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitScale = 3;

int exit_code_for(ErrorCode code);

/// Entry point behind the `powres` binary. Data goes to `out`, diagnostics
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace powres::cli
