#pragma once

#include <iosfwd>

namespace nomoforge {

/// Exit statuses: 0 success, 1 domain error, 2 usage or I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `nomoforge` command (validate, create, read, serve).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nomoforge
