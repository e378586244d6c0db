#include "deepcva/miner/normalize.hpp"

#include <set>

#include <spdlog/spdlog.h>

#include "deepcva/context/preprocess.hpp"
#include "deepcva/miner/filter.hpp"

namespace deepcva::miner {

namespace {

std::optional<context::LexResult> lex_clean(const std::optional<std::string>& source) {
  if (!source) return std::nullopt;
  auto lexed = context::lex_java(*source);
  if (lexed.unterminated_comment || lexed.unterminated_literal) return std::nullopt;
  return lexed;
}

}  // namespace

context::FileLoader commit_file_loader(const GitRepo& repo, const CommitRecord& commit) {
  const std::string post = commit.commit_hash;
  const std::optional<std::string> pre =
      commit.parent_hashes.empty() ? std::nullopt : std::optional(commit.parent_hashes.front());
  return [&repo, pre, post](context::Side side, const std::string& path) -> std::optional<std::string> {
    if (side == context::Side::pre) return pre ? repo.file_at(*pre, path) : std::nullopt;
    return repo.file_at(post, path);
  };
}

std::vector<std::string> tokens_on_lines(const context::LexResult& lexed,
                                         const std::vector<LineRef>& lines) {
  std::set<int> wanted;
  for (const auto& l : lines) wanted.insert(l.line);
  std::vector<std::string> out;
  for (const auto& t : lexed.tokens) {
    if (wanted.count(t.line)) out.push_back(context::canonical_text(t));
  }
  return out;
}

bool is_cosmetic(const Hunk& hunk, const context::LexResult* pre, const context::LexResult* post) {
  const auto side = [](const context::LexResult* lexed, const std::vector<LineRef>& lines) {
    if (lines.empty()) return std::vector<std::string>{};
    if (lexed) return tokens_on_lines(*lexed, lines);
    // Lines alone, for callers without the whole file.
    std::string text;
    for (const auto& l : lines) text += l.text + "\n";
    const auto local = context::lex_java(text);
    std::vector<std::string> out;
    for (const auto& t : local.tokens) out.push_back(context::canonical_text(t));
    return out;
  };
  return side(pre, hunk.deleted) == side(post, hunk.added);
}

CommitRecord normalize_changes(const CommitRecord& commit, const context::FileLoader& load) {
  CommitRecord out = commit;
  out.files.clear();
  for (const auto& file : commit.files) {
    if (!is_java_change(file) || file.hunks.empty()) continue;
    bool need_pre = false, need_post = false;
    for (const auto& h : file.hunks) {
      need_pre = need_pre || !h.deleted.empty();
      need_post = need_post || !h.added.empty();
    }
    std::optional<context::LexResult> pre, post;
    bool verified = true;
    if (need_pre) {
      pre = file.path_pre ? lex_clean(load(context::Side::pre, *file.path_pre)) : std::nullopt;
      verified = verified && pre.has_value();
    }
    if (need_post) {
      post = file.path_post ? lex_clean(load(context::Side::post, *file.path_post)) : std::nullopt;
      verified = verified && post.has_value();
    }
    FileChange kept = file;
    kept.hunks.clear();
    if (!verified) {
      spdlog::warn("{}@{}: {} could not be lexed; keeping its hunks unverified", commit.repo_id,
                   commit.commit_hash, file.path_post.value_or(file.path_pre.value_or("?")));
      for (auto h : file.hunks) {
        h.unverified = true;
        kept.hunks.push_back(std::move(h));
      }
    } else {
      for (const auto& h : file.hunks) {
        if (h.unverified || !is_cosmetic(h, pre ? &*pre : nullptr, post ? &*post : nullptr)) {
          kept.hunks.push_back(h);
        }
      }
    }
    if (!kept.hunks.empty()) out.files.push_back(std::move(kept));
  }
  return out;
}

}  // namespace deepcva::miner
