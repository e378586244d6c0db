#include "deepcva/context/preprocess.hpp"

#include <spdlog/spdlog.h>

#include "deepcva/context/java_lexer.hpp"

namespace deepcva::context {

namespace {

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool in_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

// Text blocks span lines, so their inner whitespace is collapsed. An open
// literal is closed so re-lexing the output cannot swallow the tokens that now
// follow it on the same line.
std::string canonical_text(const Token& token) {
  std::string text = token.kind == TokenKind::text_block
                         ? collapse_whitespace(token.text)
                         : token.text;
  if (token.unterminated) {
    if (token.kind == TokenKind::text_block) {
      text += " \"\"\"";
    } else {
      std::size_t slashes = 0;
      while (slashes < text.size() && text[text.size() - 1 - slashes] == '\\') ++slashes;
      if (slashes % 2 == 1) text.pop_back();
      text.push_back(token.kind == TokenKind::string ? '"' : '\'');
    }
  }
  return text;
}

std::string preprocess_code(std::string_view source) {
  const auto lexed = lex_java(source);
  if (lexed.unterminated_comment) {
    spdlog::warn("unterminated block comment; dropped everything after it");
  }
  std::string out;
  for (const auto& token : lexed.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += canonical_text(token);
  }
  return out;
}

}  // namespace deepcva::context
