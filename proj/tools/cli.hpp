#pragma once

#include <iosfwd>

namespace netcube::cli {

// Exit codes of the netcube tool.
inline constexpr int kOk = 0;
inline constexpr int kInputFault = 1;
inline constexpr int kVerificationFailure = 2;

// Runs `netcube <build|measure|verify|spectrum> [flags]`. Reports go to the
// --out directory; progress lines to `out`, faults to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace netcube::cli
