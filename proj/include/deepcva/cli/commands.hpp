#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deepcva::cli {

/// Runs one invocation (`args[0]` is the program name). Progress and results
/// go to `out`; failures print one JSON object {"error", "message"[, "field"]}
/// to `err` and return nonzero: 2 for usage and configuration errors, 1
/// otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deepcva::cli
