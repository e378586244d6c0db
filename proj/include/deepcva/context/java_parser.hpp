#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deepcva/context/java_lexer.hpp"

namespace deepcva::context {

enum class NodeType {
  class_decl,      // class and record declarations
  interface_decl,  // interfaces and annotation types
  enum_decl,
  method,  // methods and constructors
  if_else,
  switch_stmt,  // statements and switch expressions
  for_while_do,
  try_catch,
  other,
};

/// Serialised names: class, interface, enum_decl, method, if_else, switch,
/// for_while_do, try_catch, other.
std::string_view node_type_name(NodeType type);
std::optional<NodeType> parse_node_type(std::string_view name);

/// Every type but `other` can be a closest enclosing scope.
inline bool is_scope_type(NodeType type) { return type != NodeType::other; }

struct AstNode {
  NodeType type = NodeType::other;
  int start_line = 1;
  int end_line = 1;
  std::vector<AstNode> children;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Scope-level parse of a Java compilation unit. The root is an `other` node
/// spanning every line. Declaration spans start at their first modifier or
/// annotation. Lambda bodies and anonymous class bodies become `other` nodes;
/// initializer blocks add no node of their own, so their statements hang off
/// the enclosing type. Throws ParseError on unbalanced or truncated input.
AstNode parse_ast(std::string_view source);
AstNode parse_ast(const LexResult& lexed);

}  // namespace deepcva::context
