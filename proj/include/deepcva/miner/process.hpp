#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deepcva::miner {

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProcessResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Runs argv[0] (looked up on PATH) without a shell and collects both output
/// streams. `env` entries are added to the inherited environment. Throws
/// ProcessError when the program cannot be started or is killed by a signal.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::filesystem::path>& cwd = std::nullopt,
                          const std::vector<std::pair<std::string, std::string>>& env = {},
                          const std::string& stdin_data = {});

}  // namespace deepcva::miner
