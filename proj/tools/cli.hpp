#pragma once

#include <string>
#include <vector>

namespace maxcorr::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kDegenerate = 3,
};

/// Runs one command line (without the program name). When `env_seed` is set,
/// EC_SEED overrides --seed.
int run(const std::vector<std::string>& args, bool env_seed = true);

}  // namespace maxcorr::cli
