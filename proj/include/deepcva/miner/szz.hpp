#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deepcva/context/java_lexer.hpp"
#include "deepcva/miner/commit.hpp"
#include "deepcva/miner/git_repo.hpp"

namespace deepcva::miner {

/// A line of the fixing commit's parent revision that was traced.
struct TracedLine {
  std::string path;
  int line = 0;
  auto operator<=>(const TracedLine&) const = default;
};

struct VccTrace {
  CommitRecord vcc;                // normalized
  std::vector<TracedLine> lines;   // sorted
};

struct SzzOptions {
  /// Bound on re-blames past cosmetic commits for one line.
  int max_cosmetic_hops = 100;
};

/// SZZ over one repository. Blames every deleted code line of a fixing
/// commit's normalized hunks in its first parent, skipping blank and
/// comment-only lines. A pure-addition hunk is traced through the code lines
/// around its insertion point (old_start and old_start + 1); with no such
/// line it is skipped and logged. When the blamed commit changed the line only
/// cosmetically, blame continues from that commit's parent. Commits not
/// strictly older than both the advisory date and the fix are dropped.
/// Results are unique by hash and sorted by (timestamp, hash).
class SzzTracer {
 public:
  explicit SzzTracer(const GitRepo& repo, SzzOptions options = {});

  /// `vfc.commit` must already be normalized.
  std::vector<VccTrace> trace(const VfcRecord& vfc);

  /// Normalized version of a commit, cached.
  const CommitRecord& normalized(const std::string& hash);

 private:
  struct Origin {
    std::string rev;
    std::string path;
    int line;
  };
  const CommitRecord& raw(const std::string& hash);
  const context::LexResult* lexed(const std::string& rev, const std::string& path);
  std::optional<Origin> cosmetic_origin(const BlameLine& blamed);

  const GitRepo& repo_;
  SzzOptions options_;
  std::map<std::string, CommitRecord> raw_;
  std::map<std::string, CommitRecord> normalized_;
  std::map<std::pair<std::string, std::string>, std::unique_ptr<context::LexResult>> lexed_;
};

std::vector<VccTrace> szz_trace(const VfcRecord& vfc, const GitRepo& repo);

}  // namespace deepcva::miner
