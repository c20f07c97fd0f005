#pragma once

#include <iosfwd>

namespace rhostat::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 decided (Accept or Reject) or plain success, 2 Inconclusive,
/// 1 usage or runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rhostat::cli
