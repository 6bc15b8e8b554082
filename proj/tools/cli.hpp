#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nfs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;

/// Runs one invocation; args exclude the program name.
int run(std::vector<std::string> args, std::ostream &out, std::ostream &err);

}  // namespace nfs::cli
