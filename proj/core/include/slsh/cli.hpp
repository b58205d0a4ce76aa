#pragma once

#include <string>
#include <vector>

namespace slsh {

/// Command-line driver. Subcommands: build, query, estimate, selftest.
/// Exit codes: 0 success, 1 usage error, 2 data error, 3 failed selftest.
int run_cli(const std::vector<std::string>& args);

}  // namespace slsh
