#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepcva/miner/commit.hpp"

namespace deepcva::miner {

class GitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One line of `git blame` output.
struct BlameLine {
  std::string commit_hash;
  int orig_line = 0;      // line number in commit_hash's version of orig_path
  std::string orig_path;  // path in commit_hash (differs after renames/copies)
  int final_line = 0;     // line number in the blamed revision
};

/// Read-only access to a local repository through the git executable.
/// Instances are not shared between threads.
class GitRepo {
 public:
  explicit GitRepo(std::filesystem::path dir, std::string repo_id = {});

  const std::filesystem::path& dir() const { return dir_; }
  const std::string& repo_id() const { return repo_id_; }

  /// Full hash of a revision; throws GitError when it does not name a commit.
  std::string resolve(const std::string& rev) const;
  std::vector<std::string> parents(const std::string& hash) const;
  std::int64_t author_timestamp(const std::string& hash) const;

  /// Parents, timestamp and the zero-context diff against the first parent
  /// (the empty tree for a root commit) with rename and copy detection.
  CommitRecord load_commit(const std::string& rev) const;

  /// Blob contents of `path` at `rev`, or nullopt when the path does not exist.
  std::optional<std::string> file_at(const std::string& rev, const std::string& path) const;

  /// Blames the given 1-based lines of `path` as of `rev`, ignoring
  /// whitespace and following moves and copies, including copies from files
  /// the creating commit left untouched. Result order follows `lines`.
  std::vector<BlameLine> blame(const std::string& rev, const std::string& path,
                               const std::vector<int>& lines) const;

  /// Runs git with the fixed option prefix; throws GitError on failure.
  std::string git(const std::vector<std::string>& args) const;

 private:
  std::filesystem::path dir_;
  std::string repo_id_;
  mutable std::string empty_tree_;
};

}  // namespace deepcva::miner
