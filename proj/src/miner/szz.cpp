#include "deepcva/miner/szz.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "deepcva/miner/normalize.hpp"

namespace deepcva::miner {

SzzTracer::SzzTracer(const GitRepo& repo, SzzOptions options) : repo_(repo), options_(options) {}

const CommitRecord& SzzTracer::raw(const std::string& hash) {
  auto it = raw_.find(hash);
  if (it == raw_.end()) it = raw_.emplace(hash, repo_.load_commit(hash)).first;
  return it->second;
}

const CommitRecord& SzzTracer::normalized(const std::string& hash) {
  auto it = normalized_.find(hash);
  if (it == normalized_.end()) {
    const auto& c = raw(hash);
    it = normalized_.emplace(hash, normalize_changes(c, commit_file_loader(repo_, c))).first;
  }
  return it->second;
}

const context::LexResult* SzzTracer::lexed(const std::string& rev, const std::string& path) {
  const auto key = std::make_pair(rev, path);
  auto it = lexed_.find(key);
  if (it == lexed_.end()) {
    std::unique_ptr<context::LexResult> value;
    if (auto source = repo_.file_at(rev, path)) {
      value = std::make_unique<context::LexResult>(context::lex_java(*source));
    }
    it = lexed_.emplace(key, std::move(value)).first;
  }
  return it->second.get();
}

std::optional<SzzTracer::Origin> SzzTracer::cosmetic_origin(const BlameLine& blamed) {
  const auto& commit = raw(blamed.commit_hash);
  if (commit.parent_hashes.empty()) return std::nullopt;
  const std::string& parent = commit.parent_hashes.front();
  for (const auto& file : commit.files) {
    if (file.path_post != blamed.orig_path || !file.path_pre) continue;
    for (const auto& hunk : file.hunks) {
      const bool touches = std::any_of(hunk.added.begin(), hunk.added.end(),
                                       [&](const LineRef& l) { return l.line == blamed.orig_line; });
      if (!touches) continue;
      const auto* pre = lexed(parent, *file.path_pre);
      const auto* post = lexed(blamed.commit_hash, *file.path_post);
      if (!pre || !post || !is_cosmetic(hunk, pre, post)) return std::nullopt;
      // Same token sequence on both sides: follow the first token of the line
      // back to the line it sat on before the change.
      const auto deleted_tokens = tokens_on_lines(*pre, hunk.deleted);
      std::set<int> added_lines;
      for (const auto& l : hunk.added) added_lines.insert(l.line);
      std::set<int> deleted_lines;
      for (const auto& l : hunk.deleted) deleted_lines.insert(l.line);
      std::vector<int> pre_token_lines;
      for (const auto& t : pre->tokens) {
        if (deleted_lines.count(t.line)) pre_token_lines.push_back(t.line);
      }
      std::size_t index = 0;
      for (const auto& t : post->tokens) {
        if (!added_lines.count(t.line)) continue;
        if (t.line == blamed.orig_line) {
          if (index >= pre_token_lines.size()) return std::nullopt;
          return Origin{parent, *file.path_pre, pre_token_lines[index]};
        }
        ++index;
      }
      return std::nullopt;  // no token on the line: nothing to follow
    }
  }
  return std::nullopt;
}

std::vector<VccTrace> SzzTracer::trace(const VfcRecord& vfc) {
  const auto& fix = vfc.commit;
  if (fix.parent_hashes.empty()) {
    spdlog::info("{}: root commit has no history to trace", fix.commit_hash);
    return {};
  }
  const std::string& parent = fix.parent_hashes.front();

  std::map<std::string, std::set<int>> targets;
  for (const auto& file : fix.files) {
    if (!file.path_pre) continue;
    const auto* pre = lexed(parent, *file.path_pre);
    if (!pre) {
      spdlog::warn("{}: {} missing in parent {}; not traced", fix.commit_hash, *file.path_pre, parent);
      continue;
    }
    const auto is_code = [&](int line) {
      return line >= 1 && static_cast<std::size_t>(line) < pre->code_line.size() && pre->code_line[line];
    };
    for (const auto& hunk : file.hunks) {
      if (!hunk.deleted.empty()) {
        for (const auto& l : hunk.deleted) {
          if (is_code(l.line)) targets[*file.path_pre].insert(l.line);
        }
        continue;
      }
      bool anchored = false;
      for (int a : {hunk.old_start, hunk.old_start + 1}) {
        if (is_code(a)) {
          targets[*file.path_pre].insert(a);
          anchored = true;
        }
      }
      if (!anchored) {
        spdlog::warn("{}: orphan addition at {}:{} has no code line to anchor to; skipped",
                     fix.commit_hash, *file.path_pre, hunk.old_start);
      }
    }
  }

  std::map<std::string, std::set<TracedLine>> found;
  for (const auto& [path, lines] : targets) {
    const std::vector<int> wanted(lines.begin(), lines.end());
    const auto blamed = repo_.blame(parent, path, wanted);
    for (std::size_t i = 0; i < blamed.size(); ++i) {
      BlameLine b = blamed[i];
      int hops = 0;
      while (auto origin = cosmetic_origin(b)) {
        if (++hops > options_.max_cosmetic_hops) {
          spdlog::warn("{}:{}: more than {} cosmetic commits; stopping at {}", path, wanted[i],
                       options_.max_cosmetic_hops, b.commit_hash);
          break;
        }
        b = repo_.blame(origin->rev, origin->path, {origin->line}).front();
      }
      found[b.commit_hash].insert({path, wanted[i]});
    }
  }

  std::vector<VccTrace> out;
  for (const auto& [hash, lines] : found) {
    const auto& vcc = normalized(hash);
    if (vcc.author_timestamp >= vfc.sv_published_date || vcc.author_timestamp >= fix.author_timestamp) {
      spdlog::info("{}: candidate {} dated {} is not before the advisory ({}) and the fix ({}); dropped",
                   fix.commit_hash, hash, vcc.author_timestamp, vfc.sv_published_date,
                   fix.author_timestamp);
      continue;
    }
    out.push_back({vcc, std::vector<TracedLine>(lines.begin(), lines.end())});
  }
  std::sort(out.begin(), out.end(), [](const VccTrace& a, const VccTrace& b) {
    return std::tie(a.vcc.author_timestamp, a.vcc.commit_hash) <
           std::tie(b.vcc.author_timestamp, b.vcc.commit_hash);
  });
  return out;
}

std::vector<VccTrace> szz_trace(const VfcRecord& vfc, const GitRepo& repo) {
  SzzTracer tracer(repo);
  return tracer.trace(vfc);
}

}  // namespace deepcva::miner
