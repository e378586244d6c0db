#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deepcva/miner/commit.hpp"

namespace deepcva::miner {

class DiffParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `git diff` patch output (any context size, rename/copy headers,
/// binary markers, C-quoted paths). Context lines are not kept; deleted and
/// added lines carry their line numbers in the old and new revision. Files
/// without content hunks (pure renames, mode changes, binaries) are kept with
/// an empty hunk list.
std::vector<FileChange> parse_unified_diff(std::string_view patch);

/// Undoes git's C-style path quoting ("a\tb" -> a<TAB>b); unquoted input is
/// returned unchanged.
std::string unquote_path(std::string_view path);

}  // namespace deepcva::miner
