#pragma once

#include <string>
#include <vector>

namespace gpam::cli {

enum ExitCode : int { Ok = 0, AssertionFailed = 1, ConfigError = 2, Inconclusive = 3 };

/// Runs the command line; args excludes the program name. Reports go to the configured output directory.
int run(const std::vector<std::string>& args);

}  // namespace gpam::cli
