#pragma once

#include <string>
#include <vector>

namespace uavmatch::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFailedToVerify = 2,
  kInternal = 3,
};

// Full command line, argv[0] included.
int Run(const std::vector<std::string>& args);

}  // namespace uavmatch::cli
