// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_CLI_HPP_
#define ROK_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace rok {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the `rok` binary. args[0] is the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace rok

#endif  // ROK_CLI_HPP_
