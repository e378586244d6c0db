#pragma once

#include <optional>
#include <vector>

#include "deepcva/context/inputs.hpp"
#include "deepcva/context/java_lexer.hpp"
#include "deepcva/miner/commit.hpp"
#include "deepcva/miner/git_repo.hpp"

namespace deepcva::miner {

/// Loads files from the first parent (pre) and the commit itself (post).
/// A root commit has no pre side.
context::FileLoader commit_file_loader(const GitRepo& repo, const CommitRecord& commit);

/// Token texts on the given lines of a lexed file, in source order. A token
/// belongs to the line it starts on.
std::vector<std::string> tokens_on_lines(const context::LexResult& lexed,
                                         const std::vector<LineRef>& lines);

/// A hunk is cosmetic when its deleted and added lines carry the same token
/// sequence, i.e. they differ only in whitespace, line breaks or comments.
bool is_cosmetic(const Hunk& hunk, const context::LexResult* pre, const context::LexResult* post);

/// Keeps Java files only and drops cosmetic hunks, then files left without
/// hunks. Both file versions are lexed whole so that comments spanning hunk
/// boundaries are recognised. When a needed version cannot be loaded or does
/// not lex cleanly, the file's hunks are kept and flagged `unverified`.
/// Idempotent.
CommitRecord normalize_changes(const CommitRecord& commit, const context::FileLoader& load);

}  // namespace deepcva::miner
