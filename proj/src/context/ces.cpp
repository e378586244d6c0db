#include "deepcva/context/ces.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace deepcva::context {

namespace {

struct Candidate {
  const AstNode* node;
  int depth;
  int eloc;
};

void collect(const AstNode& node, int depth, HunkSpan span, const std::vector<bool>& code_line,
             std::vector<Candidate>& out) {
  for (const auto& child : node.children) {
    if (child.start_line > span.start || child.end_line < span.end) continue;
    if (is_scope_type(child.type)) {
      out.push_back({&child, depth + 1, effective_loc(code_line, child.start_line, child.end_line)});
    }
    collect(child, depth + 1, span, code_line, out);
  }
}

std::vector<std::string> split_lines(const std::string& source) {
  std::vector<std::string> lines;
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

int effective_loc(const std::vector<bool>& code_line, int start, int end) {
  int count = 0;
  for (int l = std::max(start, 1); l <= end && l < static_cast<int>(code_line.size()); ++l) {
    count += code_line[l] ? 1 : 0;
  }
  return count;
}

ParsedFile parse_file(std::string path, const std::string& source) {
  ParsedFile file;
  file.path = std::move(path);
  file.lines = split_lines(source);
  file.lexed = lex_java(source);
  try {
    file.ast = parse_ast(file.lexed);
  } catch (const ParseError& e) {
    file.parse_error = e.what();
  }
  return file;
}

EnclosingScope extract_ces(const AstNode& root, const std::vector<bool>& code_line,
                           HunkSpan span) {
  std::vector<Candidate> candidates;
  candidates.push_back({&root, 0, effective_loc(code_line, root.start_line, root.end_line)});
  collect(root, 0, span, code_line, candidates);
  // Stable: among equal (eloc, depth) the earlier DFS candidate wins.
  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const Candidate& a, const Candidate& b) {
                                       if (a.eloc != b.eloc) return a.eloc < b.eloc;
                                       return a.depth > b.depth;
                                     });
  EnclosingScope scope;
  scope.node_type = best->node->type;
  scope.start_line = best->node->start_line;
  scope.end_line = best->node->end_line;
  // A comment-only file still yields a one-line root scope.
  scope.effective_loc = std::max(1, best->eloc);
  return scope;
}

EnclosingScope extract_ces(const ParsedFile& file, HunkSpan span, std::size_t hunk_ref) {
  const int line_count = static_cast<int>(file.lines.size());
  if (span.start < 1 || span.end < span.start || span.end > std::max(1, line_count)) {
    throw std::out_of_range("hunk span " + std::to_string(span.start) + "-" +
                            std::to_string(span.end) + " outside " + file.path + " (" +
                            std::to_string(line_count) + " lines)");
  }
  EnclosingScope scope;
  if (file.ast) {
    scope = extract_ces(*file.ast, file.lexed.code_line, span);
  } else {
    scope.node_type = NodeType::other;
    scope.start_line = std::max(1, span.start - kFallbackWindow);
    scope.end_line = std::min(std::max(1, line_count), span.end + kFallbackWindow);
    scope.effective_loc =
        std::max(1, effective_loc(file.lexed.code_line, scope.start_line, scope.end_line));
    scope.fallback = true;
  }
  scope.file_path = file.path;
  scope.hunk_ref = hunk_ref;
  std::string text;
  for (int l = scope.start_line; l <= scope.end_line && l <= line_count; ++l) {
    text += file.lines[l - 1];
    if (l < scope.end_line) text.push_back('\n');
  }
  scope.source_text = std::move(text);
  return scope;
}

}  // namespace deepcva::context
