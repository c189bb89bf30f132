#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qlayout {

enum ExitCode { exit_ok = 0, exit_verify_failed = 1, exit_usage = 2, exit_timeout = 3 };

/// Entry point behind the qlayout executable; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlayout
