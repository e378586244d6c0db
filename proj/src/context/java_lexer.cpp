#include "deepcva/context/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace deepcva::context {

namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract",  "assert",     "boolean",   "break",     "byte",      "case",
    "catch",     "char",       "class",     "const",     "continue",  "default",
    "do",        "double",     "else",      "enum",      "extends",   "final",
    "finally",   "float",      "for",       "goto",      "if",        "implements",
    "import",    "instanceof", "int",       "interface", "long",      "native",
    "new",       "package",    "private",   "protected", "public",    "return",
    "short",     "static",     "strictfp",  "super",     "switch",    "synchronized",
    "this",      "throw",      "throws",    "transient", "try",       "void",
    "volatile",  "while",      "true",      "false",     "null",
};

// Longest first so a linear scan implements maximal munch.
constexpr std::array<std::string_view, 39> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", ">>", "(",
    ")",    "{",   "}",   "[",   "]",   ";",  ",",  ".",  "@",  "=",  ">",  "<",  "!",
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    result_.line_count = count_lines(src_);
    result_.code_line.assign(static_cast<std::size_t>(result_.line_count) + 2, false);
    while (pos_ < src_.size()) step();
    result_.code_line.resize(static_cast<std::size_t>(result_.line_count) + 1);
    return std::move(result_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void emit(TokenKind kind, std::size_t start, int line, int col) {
    const int end_line = line_ - (pos_ > start && src_[pos_ - 1] == '\n' ? 1 : 0);
    result_.tokens.push_back({kind, std::string(src_.substr(start, pos_ - start)), line, col,
                              std::max(line, end_line)});
    for (int l = line; l <= std::max(line, end_line); ++l) {
      if (l < static_cast<int>(result_.code_line.size())) result_.code_line[l] = true;
    }
  }

  void step() {
    const char c = peek();
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      advance();
      return;
    }
    if (c == '/' && peek(1) == '/') {
      while (pos_ < src_.size() && peek() != '\n') advance();
      return;
    }
    if (c == '/' && peek(1) == '*') {
      advance();
      advance();
      while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
      if (pos_ >= src_.size()) {
        result_.unterminated_comment = true;
        return;
      }
      advance();
      advance();
      return;
    }
    const std::size_t start = pos_;
    const int line = line_, col = col_;
    const auto uc = static_cast<unsigned char>(c);
    if (c == '"' && peek(1) == '"' && peek(2) == '"') {
      const bool closed = text_block();
      emit(TokenKind::text_block, start, line, col);
      result_.tokens.back().unterminated = !closed;
      return;
    }
    if (c == '"' || c == '\'') {
      const bool closed = quoted(c);
      emit(c == '"' ? TokenKind::string : TokenKind::character, start, line, col);
      result_.tokens.back().unterminated = !closed;
      return;
    }
    if (std::isdigit(uc) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      number();
      emit(TokenKind::number, start, line, col);
      return;
    }
    if (ident_start(uc)) {
      while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(peek()))) advance();
      // `non-sealed` is a single modifier despite the hyphen.
      if (src_.substr(start, pos_ - start) == "non" && src_.substr(pos_, 7) == "-sealed") {
        for (int i = 0; i < 7; ++i) advance();
      }
      const auto word = src_.substr(start, pos_ - start);
      emit(is_java_keyword(word) ? TokenKind::keyword : TokenKind::identifier, start, line, col);
      return;
    }
    for (auto op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        emit(TokenKind::op, start, line, col);
        return;
      }
    }
    // Any other byte (including ?, :, +, ~, stray characters) is a one-char token.
    advance();
    emit(TokenKind::op, start, line, col);
  }

  bool quoted(char quote) {
    advance();
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == '\\' && pos_ + 1 < src_.size() && peek(1) != '\n') {
        advance();
        advance();
        continue;
      }
      if (c == '\n') break;
      advance();
      if (c == quote) return true;
    }
    result_.unterminated_literal = true;
    return false;
  }

  bool text_block() {
    for (int i = 0; i < 3; ++i) advance();
    while (pos_ < src_.size()) {
      if (peek() == '\\' && pos_ + 1 < src_.size()) {
        advance();
        advance();
        continue;
      }
      if (peek() == '"' && peek(1) == '"' && peek(2) == '"') {
        for (int i = 0; i < 3; ++i) advance();
        return true;
      }
      advance();
    }
    result_.unterminated_literal = true;
    return false;
  }

  void number() {
    while (pos_ < src_.size()) {
      const char c = peek();
      const char next = peek(1);
      if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') && (next == '+' || next == '-')) {
        advance();
        advance();
        continue;
      }
      if (c == '.') {
        // `1.5`, `1.e3`, `1.f` and `1.` continue the literal; `1.foo` does not.
        const bool suffix = std::string_view("eEfFdD").find(next) != std::string_view::npos;
        if (next == '.' || (ident_start(static_cast<unsigned char>(next)) && !suffix)) return;
        advance();
        continue;
      }
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return;
      advance();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  LexResult result_;
};

}  // namespace

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

int count_lines(std::string_view source) {
  if (source.empty()) return 0;
  int lines = static_cast<int>(std::count(source.begin(), source.end(), '\n'));
  if (source.back() != '\n') ++lines;
  return lines;
}

LexResult lex_java(std::string_view source) { return Lexer(source).run(); }

}  // namespace deepcva::context
