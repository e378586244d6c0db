#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace deepcva::context {

enum class TokenKind { identifier, keyword, number, string, character, text_block, op };

struct Token {
  TokenKind kind;
  std::string text;
  int line;      // 1-based line of the first character
  int column;    // 1-based
  int end_line;  // line of the last character; differs from `line` only for text blocks
  bool unterminated = false;  // string/char/text-block literal missing its closing quote
};

struct LexResult {
  std::vector<Token> tokens;  // comments and whitespace removed
  int line_count = 0;
  /// code_line[i] is true when line i (1-based; index 0 unused) holds at
  /// least one non-comment token.
  std::vector<bool> code_line;
  bool unterminated_comment = false;
  bool unterminated_literal = false;
};

/// Tolerant Java lexer: never throws. Unterminated block comments run to end of
/// input; unterminated string/char literals end at end of line. Operators are
/// split by maximal munch, so `>>=` is one token and `a++` is `a`, `++`.
LexResult lex_java(std::string_view source);

bool is_java_keyword(std::string_view word);

/// Number of lines in `source` as an editor would count them (a trailing
/// newline does not open a new line).
int count_lines(std::string_view source);

}  // namespace deepcva::context
