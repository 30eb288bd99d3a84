#pragma once

#include <string>
#include <vector>

namespace irs::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kData = 4,
};

// Entry point of the `irs` tool. Numeric results go to stdout as JSON,
// human-readable summaries and diagnostics to stderr.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace irs::cli
