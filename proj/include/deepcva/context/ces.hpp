#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "deepcva/context/java_lexer.hpp"
#include "deepcva/context/java_parser.hpp"

namespace deepcva::context {

/// Lines padded on each side of a hunk when its file cannot be parsed.
inline constexpr int kFallbackWindow = 10;

struct HunkSpan {
  int start;
  int end;  // inclusive
};

struct EnclosingScope {
  std::string file_path;
  std::size_t hunk_ref = 0;
  NodeType node_type = NodeType::other;
  int start_line = 1;
  int end_line = 1;
  std::string source_text;  // raw lines start..end, newline-joined
  int effective_loc = 1;
  bool fallback = false;
};

/// A source file with everything CES extraction needs. `ast` is empty when
/// the file does not parse; `parse_error` then says why.
struct ParsedFile {
  std::string path;
  std::vector<std::string> lines;  // lines[0] is line 1
  LexResult lexed;
  std::optional<AstNode> ast;
  std::string parse_error;
};

ParsedFile parse_file(std::string path, const std::string& source);

/// Non-blank, non-comment lines in [start, end].
int effective_loc(const std::vector<bool>& code_line, int start, int end);

/// Closest enclosing scope of `span`: among the root and every scope-typed
/// node containing the span, the one with the fewest effective lines, ties
/// going to the deepest node and then to the earliest in document order.
/// Only the node type and span fields of the result are filled in.
EnclosingScope extract_ces(const AstNode& root, const std::vector<bool>& code_line, HunkSpan span);

/// Full extraction over a parsed file, falling back to a window of
/// kFallbackWindow lines around the span when the file did not parse.
/// Throws std::out_of_range when the span lies outside the file.
EnclosingScope extract_ces(const ParsedFile& file, HunkSpan span, std::size_t hunk_ref = 0);

}  // namespace deepcva::context
