#pragma once

#include <string>
#include <vector>

namespace cewe::cli {

// Runs one subcommand. Exit codes: 0 success, 1 usage/configuration error,
// 2 data or file-format error.
int run(const std::vector<std::string>& args);

}  // namespace cewe::cli
