#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deepcva/miner/commit.hpp"

namespace deepcva::miner {

inline constexpr std::size_t kDefaultMaxFiles = 100;
inline constexpr std::size_t kDefaultMaxLines = 10000;

/// Deleted plus added lines over every file of the commit.
std::size_t changed_line_count(const CommitRecord& commit);

/// Drops repeated (repo_id, commit_hash) pairs, keeping the first, and
/// commits touching more than `max_files` files or `max_lines` changed lines.
/// Counts include non-Java files. Order is preserved.
std::vector<VfcRecord> filter_vfcs(std::span<const VfcRecord> candidates,
                                   std::size_t max_files = kDefaultMaxFiles,
                                   std::size_t max_lines = kDefaultMaxLines);

bool is_java_path(const std::string& path);
/// True when either side of the change is a .java file.
bool is_java_change(const FileChange& change);

}  // namespace deepcva::miner
