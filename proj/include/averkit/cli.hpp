#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace averkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitGate = 4;

inline constexpr const char* kVersion = "0.3.1";

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --output is given; logs, manifests without a sidecar path,
/// and error objects go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace averkit::cli
