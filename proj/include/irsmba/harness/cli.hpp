// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace irsmba::harness {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitVerify = 2, kExitIo = 3 };

/// Entry point for the command-line harness. `args` excludes the program name.
/// Results go to `out`, progress and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irsmba::harness
