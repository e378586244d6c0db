#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "deepcva/context/ces.hpp"
#include "deepcva/miner/commit.hpp"

namespace deepcva::context {

enum class Side { pre, post };

/// Loads a file as of the parent (pre) or the commit itself (post).
using FileLoader =
    std::function<std::optional<std::string>(Side side, const std::string& path)>;

struct CommitScopes {
  std::vector<EnclosingScope> pre;   // one per hunk with deletions, duplicates removed
  std::vector<EnclosingScope> post;  // one per hunk with additions, duplicates removed
};

/// The four model inputs of a commit, each already preprocessed.
struct CommitInputs {
  std::string pre_hunks;
  std::string post_hunks;
  std::string pre_ctx;
  std::string post_ctx;
};

/// CES of every hunk: deletions against the parent version of the file,
/// additions against the commit's version. Hunks are visited in file order,
/// then hunk order; `hunk_ref` counts hunks across the whole commit. A file
/// the loader cannot supply falls back to the changed lines' own window.
CommitScopes compute_scopes(const miner::CommitRecord& commit, const FileLoader& load);

/// Concatenates hunks and scopes in commit order. A side with nothing in it
/// is the empty string.
CommitInputs build_inputs(const miner::CommitRecord& commit, const CommitScopes& scopes);

}  // namespace deepcva::context
