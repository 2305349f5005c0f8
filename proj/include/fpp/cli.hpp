#pragma once

#include <iosfwd>

namespace fpp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitGateFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the fpp tool. 0 on success, 1 when a hard gate fails or the
/// computation itself fails, 2 on usage and validation errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace fpp::cli
