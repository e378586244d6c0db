#include "deepcva/context/inputs.hpp"

#include <map>
#include <set>
#include <tuple>

#include <spdlog/spdlog.h>

#include "deepcva/context/preprocess.hpp"

namespace deepcva::context {

namespace {

HunkSpan span_of(const std::vector<miner::LineRef>& lines) {
  return {lines.front().line, lines.back().line};
}

EnclosingScope scope_from_lines(const std::string& path, std::size_t hunk_ref,
                                const std::vector<miner::LineRef>& lines) {
  EnclosingScope scope;
  scope.file_path = path;
  scope.hunk_ref = hunk_ref;
  scope.start_line = lines.front().line;
  scope.end_line = lines.back().line;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) scope.source_text.push_back('\n');
    scope.source_text += lines[i].text;
  }
  scope.effective_loc = std::max<int>(1, static_cast<int>(lines.size()));
  scope.fallback = true;
  return scope;
}

class SideScopes {
 public:
  SideScopes(Side side, const FileLoader& load) : side_(side), load_(load) {}

  void add(const std::string& path, std::size_t hunk_ref,
           const std::vector<miner::LineRef>& lines) {
    if (lines.empty()) return;
    auto it = files_.find(path);
    if (it == files_.end()) {
      std::optional<ParsedFile> parsed;
      if (auto source = load_(side_, path)) {
        parsed = parse_file(path, *source);
        if (!parsed->ast) {
          spdlog::warn("{}: {}; using a {}-line window", path, parsed->parse_error,
                       kFallbackWindow);
        }
      } else {
        spdlog::warn("{}: file unavailable; using the changed lines as context", path);
      }
      it = files_.emplace(path, std::move(parsed)).first;
    }
    EnclosingScope scope;
    try {
      scope = it->second ? extract_ces(*it->second, span_of(lines), hunk_ref)
                         : scope_from_lines(path, hunk_ref, lines);
    } catch (const std::out_of_range& e) {
      spdlog::warn("{}", e.what());
      scope = scope_from_lines(path, hunk_ref, lines);
    }
    if (seen_.insert({scope.file_path, scope.start_line, scope.end_line}).second) {
      scopes_.push_back(std::move(scope));
    }
  }

  std::vector<EnclosingScope> take() { return std::move(scopes_); }

 private:
  Side side_;
  const FileLoader& load_;
  std::map<std::string, std::optional<ParsedFile>> files_;
  std::set<std::tuple<std::string, int, int>> seen_;
  std::vector<EnclosingScope> scopes_;
};

void append(std::string& out, const std::string& piece) {
  if (piece.empty()) return;
  if (!out.empty()) out.push_back(' ');
  out += piece;
}

std::string join_lines(const std::vector<miner::LineRef>& lines) {
  std::string text;
  for (const auto& l : lines) {
    text += l.text;
    text.push_back('\n');
  }
  return text;
}

}  // namespace

CommitScopes compute_scopes(const miner::CommitRecord& commit, const FileLoader& load) {
  SideScopes pre(Side::pre, load);
  SideScopes post(Side::post, load);
  std::size_t hunk_ref = 0;
  for (const auto& file : commit.files) {
    for (const auto& hunk : file.hunks) {
      if (file.path_pre) pre.add(*file.path_pre, hunk_ref, hunk.deleted);
      if (file.path_post) post.add(*file.path_post, hunk_ref, hunk.added);
      ++hunk_ref;
    }
  }
  return {pre.take(), post.take()};
}

CommitInputs build_inputs(const miner::CommitRecord& commit, const CommitScopes& scopes) {
  CommitInputs inputs;
  for (const auto& file : commit.files) {
    for (const auto& hunk : file.hunks) {
      append(inputs.pre_hunks, preprocess_code(join_lines(hunk.deleted)));
      append(inputs.post_hunks, preprocess_code(join_lines(hunk.added)));
    }
  }
  for (const auto& scope : scopes.pre) append(inputs.pre_ctx, preprocess_code(scope.source_text));
  for (const auto& scope : scopes.post) append(inputs.post_ctx, preprocess_code(scope.source_text));
  return inputs;
}

}  // namespace deepcva::context
