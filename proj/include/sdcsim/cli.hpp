#pragma once

#include <string>
#include <vector>

namespace sdcsim::cli {

/// Entry point behind the sdcsim binary. Returns the process exit code:
/// 0 success, 2 input validation, 3 infeasible embedding, 4 internal
/// inconsistency.
int run(const std::vector<std::string>& args);

}  // namespace sdcsim::cli
