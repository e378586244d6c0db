#include "deepcva/context/java_parser.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>

namespace deepcva::context {

namespace {

constexpr std::array<std::string_view, 9> kNodeNames = {
    "class", "interface", "enum_decl", "method", "if_else",
    "switch", "for_while_do", "try_catch", "other",
};

constexpr std::array<std::string_view, 14> kModifiers = {
    "public",   "protected", "private",      "static",    "final",  "abstract", "native",
    "strictfp", "transient", "synchronized", "volatile", "default", "sealed",   "non-sealed",
};

class Parser {
 public:
  explicit Parser(const LexResult& lexed) : tokens_(lexed.tokens), line_count_(lexed.line_count) {}

  AstNode parse_unit() {
    AstNode root{NodeType::other, 1, std::max(1, line_count_), {}};
    while (!at_end()) {
      if (at("package") || at("import")) {
        while (!at(";")) {
          if (at_end()) fail("unterminated package or import declaration");
          next();
        }
        next();
      } else if (at(";")) {
        next();
      } else {
        parse_member(root);
      }
    }
    return root;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }

  bool at(std::string_view text, std::size_t ahead = 0) const {
    const auto i = pos_ + ahead;
    return i < tokens_.size() && tokens_[i].text == text &&
           tokens_[i].kind != TokenKind::string && tokens_[i].kind != TokenKind::character &&
           tokens_[i].kind != TokenKind::text_block;
  }

  bool at_any(std::initializer_list<std::string_view> texts) const {
    return std::any_of(texts.begin(), texts.end(), [&](auto t) { return at(t); });
  }

  bool is_identifier(std::size_t ahead) const {
    const auto i = pos_ + ahead;
    return i < tokens_.size() && tokens_[i].kind == TokenKind::identifier;
  }

  int line() const { return at_end() ? std::max(1, line_count_) : tokens_[pos_].line; }

  const Token& next() {
    if (at_end()) fail("unexpected end of file");
    last_line_ = tokens_[pos_].end_line;
    return tokens_[pos_++];
  }

  void expect(std::string_view text) {
    if (!at(text)) {
      fail("expected '" + std::string(text) + "' but found " +
           (at_end() ? std::string("end of file") : "'" + tokens_[pos_].text + "'"));
    }
    next();
  }

  [[noreturn]] void fail(const std::string& message) const {
    if (at_end()) throw ParseError(message, std::max(1, line_count_), 1);
    throw ParseError(message, tokens_[pos_].line, tokens_[pos_].column);
  }

  bool at_modifier(std::size_t ahead = 0) const {
    const auto i = pos_ + ahead;
    if (i >= tokens_.size()) return false;
    const auto& text = tokens_[i].text;
    if (text == "sealed" || text == "non-sealed") {
      // Contextual: only a modifier when another word follows.
      return i + 1 < tokens_.size() && tokens_[i + 1].kind != TokenKind::op;
    }
    return std::find(kModifiers.begin(), kModifiers.end(), text) != kModifiers.end();
  }

  bool at_annotation(std::size_t ahead = 0) const {
    return at("@", ahead) && !at("interface", ahead + 1);
  }

  // Offset past any annotations and modifiers starting at `ahead`, without
  // consuming. Annotation arguments are skipped by bracket matching.
  std::size_t skip_modifiers_lookahead(std::size_t ahead) const {
    while (pos_ + ahead < tokens_.size()) {
      if (at_annotation(ahead)) {
        ahead += 2;
        while (at(".", ahead) && is_identifier(ahead + 1)) ahead += 2;
        if (at("(", ahead)) {
          int depth = 0;
          do {
            if (pos_ + ahead >= tokens_.size()) return ahead;
            if (at("(", ahead)) ++depth;
            if (at(")", ahead)) --depth;
            ++ahead;
          } while (depth > 0);
        }
      } else if (at_modifier(ahead)) {
        ++ahead;
      } else {
        break;
      }
    }
    return ahead;
  }

  bool at_type_decl(std::size_t ahead = 0) const {
    if (at("class", ahead) || at("interface", ahead) || at("enum", ahead)) return true;
    if (at("@", ahead) && at("interface", ahead + 1)) return true;
    return at("record", ahead) && is_identifier(ahead + 1) &&
           (at("(", ahead + 2) || at("<", ahead + 2));
  }

  void skip_modifiers(AstNode& parent) {
    for (;;) {
      if (at_annotation()) {
        next();
        next();
        while (at(".") && is_identifier(1)) {
          next();
          next();
        }
        if (at("(")) skip_parens(parent);
      } else if (at_modifier()) {
        next();
      } else {
        return;
      }
    }
  }

  void parse_member(AstNode& parent) {
    const int start = line();
    skip_modifiers(parent);
    if (at_type_decl()) {
      parse_type_decl(parent, start);
    } else if (at("{")) {
      parse_block(parent);  // initializer block: no node of its own
    } else if (at(";")) {
      next();
    } else {
      parse_field_or_method(parent, start);
    }
  }

  void parse_type_decl(AstNode& parent, int start) {
    NodeType type = NodeType::class_decl;
    if (at("@")) {
      next();
      type = NodeType::interface_decl;
    } else if (at("interface")) {
      type = NodeType::interface_decl;
    } else if (at("enum")) {
      type = NodeType::enum_decl;
    }
    next();
    AstNode node{type, start, start, {}};
    // Header: name, type parameters, record components, extends/implements.
    while (!at("{")) {
      if (at_end() || at(";") || at("}")) fail("malformed type declaration header");
      if (at("(")) {
        skip_parens(node);
      } else {
        next();
      }
    }
    next();
    if (type == NodeType::enum_decl) parse_enum_constants(node);
    parse_class_body(node);
    node.end_line = last_line_;
    parent.children.push_back(std::move(node));
  }

  // Consumes members up to and including the closing brace.
  void parse_class_body(AstNode& node) {
    while (!at("}")) {
      if (at_end()) fail("unexpected end of file; expected '}'");
      parse_member(node);
    }
    next();
  }

  void parse_enum_constants(AstNode& node) {
    for (;;) {
      if (at(";")) {
        next();
        return;
      }
      if (at("}")) return;
      const int start = line();
      skip_modifiers(node);
      if (!is_identifier(0)) fail("expected enum constant");
      next();
      if (at("(")) skip_parens(node);
      if (at("{")) {
        AstNode body{NodeType::other, start, start, {}};
        next();
        parse_class_body(body);
        body.end_line = last_line_;
        node.children.push_back(std::move(body));
      }
      if (at(",")) {
        next();
      } else if (!at(";") && !at("}")) {
        fail("expected ',', ';' or '}' after enum constant");
      }
    }
  }

  void parse_field_or_method(AstNode& parent, int start) {
    // The first of `(`, `=`, `;` decides; `Name {` is a compact record constructor.
    if (is_identifier(0) && at("{", 1)) {
      AstNode node{NodeType::method, start, start, {}};
      next();
      parse_block(node);
      node.end_line = last_line_;
      parent.children.push_back(std::move(node));
      return;
    }
    std::size_t ahead = 0;
    for (;; ++ahead) {
      if (pos_ + ahead >= tokens_.size()) fail("unexpected end of file in member declaration");
      if (at("(", ahead) || at("=", ahead) || at(";", ahead)) break;
      if (at("{", ahead) || at("}", ahead)) {
        pos_ += ahead;
        fail("unexpected '" + tokens_[pos_].text + "' in member declaration");
      }
    }
    if (!at("(", ahead)) {
      skip_expression(parent, {";"});
      expect(";");
      return;
    }
    AstNode node{NodeType::method, start, start, {}};
    while (!at("(")) next();
    skip_parens(node);
    // throws clause, array dims, or an annotation element default
    while (!at("{") && !at(";")) {
      if (at_end() || at("}")) fail("malformed method declaration");
      if (at("default")) {
        next();
        skip_expression(node, {";"});
      } else {
        next();
      }
    }
    if (at("{")) {
      parse_block(node);
    } else {
      next();
    }
    node.end_line = last_line_;
    parent.children.push_back(std::move(node));
  }

  void parse_block(AstNode& parent) {
    expect("{");
    while (!at("}")) {
      if (at_end()) fail("unexpected end of file; expected '}'");
      parse_statement(parent);
    }
    next();
  }

  void parse_statement(AstNode& parent) {
    const int start = line();
    if (at("{")) {
      parse_block(parent);
    } else if (at(";")) {
      next();
    } else if (at("if")) {
      AstNode node{NodeType::if_else, start, start, {}};
      next();
      skip_parens(node);
      parse_statement(node);
      if (at("else")) {
        next();
        parse_statement(node);
      }
      finish(parent, std::move(node));
    } else if (at("for") || at("while")) {
      AstNode node{NodeType::for_while_do, start, start, {}};
      next();
      skip_parens(node);
      parse_statement(node);
      finish(parent, std::move(node));
    } else if (at("do")) {
      AstNode node{NodeType::for_while_do, start, start, {}};
      next();
      parse_statement(node);
      expect("while");
      skip_parens(node);
      expect(";");
      finish(parent, std::move(node));
    } else if (at("try")) {
      AstNode node{NodeType::try_catch, start, start, {}};
      next();
      if (at("(")) skip_parens(node);
      parse_block(node);
      while (at("catch")) {
        next();
        skip_parens(node);
        parse_block(node);
      }
      if (at("finally")) {
        next();
        parse_block(node);
      }
      finish(parent, std::move(node));
    } else if (at("switch")) {
      parse_switch(parent);
      if (!at_end() && at(";")) next();  // a switch expression used as a statement
    } else if (at("synchronized") && at("(", 1)) {
      next();
      skip_parens(parent);
      parse_block(parent);
    } else if (at_type_decl(skip_modifiers_lookahead(0))) {
      skip_modifiers(parent);
      parse_type_decl(parent, start);
    } else if (is_identifier(0) && at(":", 1)) {
      next();
      next();
      parse_statement(parent);
    } else {
      skip_expression(parent, {";"});
      expect(";");
    }
  }

  void parse_switch(AstNode& parent) {
    AstNode node{NodeType::switch_stmt, line(), line(), {}};
    next();
    skip_parens(node);
    expect("{");
    while (!at("}")) {
      if (at_end()) fail("unexpected end of file in switch");
      if (at("case") || (at("default") && (at(":", 1) || at("->", 1)))) {
        next();
        skip_expression(node, {":", "->"});
        if (at("->")) {
          next();
          if (at("{")) {
            parse_block(node);
          } else if (at("throw")) {
            parse_statement(node);
          } else {
            skip_expression(node, {";"});
            expect(";");
          }
        } else {
          expect(":");
        }
      } else {
        parse_statement(node);
      }
    }
    next();
    finish(parent, std::move(node));
  }

  void finish(AstNode& parent, AstNode node) {
    node.end_line = last_line_;
    parent.children.push_back(std::move(node));
  }

  void skip_parens(AstNode& parent) {
    expect("(");
    skip_expression(parent, {")"});
    expect(")");
  }

  // Consumes an expression up to (not including) one of `stops` at bracket
  // depth 0. Braces inside the expression open lambda bodies, anonymous class
  // bodies or array initializers; `switch` opens a switch expression.
  void skip_expression(AstNode& parent, std::initializer_list<std::string_view> stops) {
    int depth = 0;
    for (;;) {
      if (at_end()) fail("unexpected end of file in expression");
      if (depth == 0 && at_any(stops)) return;
      if (at("(") || at("[")) {
        ++depth;
        next();
      } else if (at(")") || at("]")) {
        if (depth == 0) return;
        --depth;
        next();
      } else if (at("}")) {
        if (depth == 0) return;
        fail("unbalanced '}' in expression");
      } else if (at("switch")) {
        parse_switch(parent);
      } else if (at("{")) {
        const bool lambda = pos_ > 0 && tokens_[pos_ - 1].text == "->";
        const bool anonymous = pos_ > 0 && tokens_[pos_ - 1].text == ")";
        if (lambda || anonymous) {
          AstNode body{NodeType::other, line(), line(), {}};
          if (lambda) {
            parse_block(body);
          } else {
            next();
            parse_class_body(body);
          }
          finish(parent, std::move(body));
        } else {
          next();
          skip_expression(parent, {"}"});
          expect("}");
        }
      } else {
        next();
      }
    }
  }

  const std::vector<Token>& tokens_;
  int line_count_;
  std::size_t pos_ = 0;
  int last_line_ = 1;
};

}  // namespace

std::string_view node_type_name(NodeType type) {
  return kNodeNames[static_cast<std::size_t>(type)];
}

std::optional<NodeType> parse_node_type(std::string_view name) {
  for (std::size_t i = 0; i < kNodeNames.size(); ++i) {
    if (kNodeNames[i] == name) return static_cast<NodeType>(i);
  }
  return std::nullopt;
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

AstNode parse_ast(const LexResult& lexed) { return Parser(lexed).parse_unit(); }

AstNode parse_ast(std::string_view source) { return parse_ast(lex_java(source)); }

}  // namespace deepcva::context
