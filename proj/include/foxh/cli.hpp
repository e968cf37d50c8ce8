#pragma once

// Command-line front end: eval, verify and simplify.
//
// Exit codes: 0 success, 1 identity failure, 2 usage or parse error,
// 3 numerical or domain error.

#include <complex>
#include <ostream>
#include <string>
#include <vector>

namespace foxh {

inline constexpr int kExitPass = 0;
inline constexpr int kExitIdentityFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The value as "re" or "re+im i" with 12 digits after the point.
std::string format_value(std::complex<double> v);

}  // namespace foxh
