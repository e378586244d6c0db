#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepcva/eval/cvss.hpp"

namespace deepcva::miner {

struct LineRef {
  int line;
  std::string text;
  bool operator==(const LineRef&) const = default;
};

struct Hunk {
  // Unified-diff header fields; zero when the hunk was read back from JSON.
  int old_start = 0;
  int old_count = 0;
  int new_start = 0;
  int new_count = 0;
  std::vector<LineRef> deleted;  // line numbers in the parent revision
  std::vector<LineRef> added;    // line numbers in the commit's revision
  /// Set by normalize_changes when a file could not be lexed/loaded and the
  /// hunk was kept without checking it.
  bool unverified = false;
};

struct FileChange {
  std::optional<std::string> path_pre;   // absent for added files
  std::optional<std::string> path_post;  // absent for deleted files
  std::vector<Hunk> hunks;
  bool rename_detected = false;
};

struct CommitRecord {
  std::string repo_id;
  std::string commit_hash;
  std::vector<std::string> parent_hashes;
  std::int64_t author_timestamp = 0;  // UTC seconds
  std::vector<FileChange> files;
};

struct VfcRecord {
  CommitRecord commit;
  std::string advisory_id;
  std::int64_t sv_published_date = 0;  // UTC seconds
  CvssAssessment labels;
};

/// One row of the VCC corpus.
struct VccRecord {
  CommitRecord commit;
  CvssAssessment labels;
  bool label_conflict = false;
};

}  // namespace deepcva::miner
