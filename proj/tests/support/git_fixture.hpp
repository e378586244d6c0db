#pragma once

// Throwaway git repositories with controlled author/committer dates.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "deepcva/miner/process.hpp"

namespace deepcva::testing {

class GitFixture {
 public:
  GitFixture() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "deepcva-git-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    dir_ = tmpl;
    git({"init", "-q"});
    git({"config", "user.name", "Fixture"});
    git({"config", "user.email", "fixture@example.com"});
    git({"config", "commit.gpgsign", "false"});
  }
  GitFixture(const GitFixture&) = delete;
  GitFixture& operator=(const GitFixture&) = delete;
  ~GitFixture() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }

  const std::filesystem::path& dir() const { return dir_; }

  void write(const std::string& path, const std::string& content) {
    const auto full = dir_ / path;
    std::filesystem::create_directories(full.parent_path());
    std::ofstream(full, std::ios::binary) << content;
  }
  void remove(const std::string& path) { git({"rm", "-q", path}); }
  void move(const std::string& from, const std::string& to) { git({"mv", from, to}); }

  /// Commits the whole working tree with author and committer time `ts`.
  std::string commit(const std::string& message, long long ts) {
    git({"add", "-A"});
    const std::string date = "@" + std::to_string(ts) + " +0000";
    git({"commit", "-q", "--allow-empty", "-m", message},
        {{"GIT_AUTHOR_DATE", date}, {"GIT_COMMITTER_DATE", date}});
    auto head = git({"rev-parse", "HEAD"});
    head.pop_back();
    return head;
  }

  std::string git(const std::vector<std::string>& args,
                  const std::vector<std::pair<std::string, std::string>>& env = {}) {
    std::vector<std::string> argv = {"git", "-C", dir_.string()};
    argv.insert(argv.end(), args.begin(), args.end());
    const auto r = miner::run_process(argv, std::nullopt, env);
    if (r.exit_code != 0) throw std::runtime_error("git fixture: " + r.err);
    return r.out;
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace deepcva::testing
