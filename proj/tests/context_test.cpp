#include <functional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "deepcva/context/ces.hpp"
#include "deepcva/context/inputs.hpp"
#include "deepcva/context/java_lexer.hpp"
#include "deepcva/context/java_parser.hpp"
#include "deepcva/context/preprocess.hpp"
#include "support/golden_ces.hpp"

using namespace deepcva::context;
namespace miner = deepcva::miner;

namespace {

std::vector<std::string> texts(const LexResult& lexed) {
  std::vector<std::string> out;
  for (const auto& t : lexed.tokens) out.push_back(t.text);
  return out;
}

void walk(const AstNode& node, int depth, const std::function<void(const AstNode&, int)>& f) {
  f(node, depth);
  for (const auto& c : node.children) walk(c, depth + 1, f);
}

// Generator of Java-ish fragments mixing every lexical category.
std::string random_fragment(std::mt19937_64& rng) {
  static const std::vector<std::string> pool = {
      "int",  "a",     "b_1",   "System", "system", "equals", "=",     "==",    ">>>=", "->",
      "::",   "++",    "--",    ";",      "{",      "}",      "(",     ")",     "0x1F", "1.5e-3",
      "3L",   "\"s t\"", "'c'", "'\\''",  "\"a\\\"b\"", "// line\n", "/* block\n x */",
      "\"\"\"\n  text\n   block\"\"\"", " ", "  ", "\n", "\t", "@", "?", ":", ".5",
  };
  std::string out;
  const auto n = rng() % 40;
  for (std::size_t i = 0; i < n; ++i) {
    out += pool[rng() % pool.size()];
    if (rng() % 2) out += ' ';
  }
  return out;
}

}  // namespace

TEST_CASE("lexer splits operators by maximal munch") {
  CHECK(texts(lex_java("a++")) == std::vector<std::string>{"a", "++"});
  CHECK(texts(lex_java("x>=y;")) == std::vector<std::string>{"x", ">=", "y", ";"});
  CHECK(texts(lex_java("a>>>=b->c::d")) ==
        std::vector<std::string>{"a", ">>>=", "b", "->", "c", "::", "d"});
  CHECK(texts(lex_java("s = \"a // not a comment\";")) ==
        std::vector<std::string>{"s", "=", "\"a // not a comment\"", ";"});
  CHECK(texts(lex_java("1.5e-3f + .5 - 0xFFL")) ==
        std::vector<std::string>{"1.5e-3f", "+", ".5", "-", "0xFFL"});
  CHECK(texts(lex_java("")).empty());
}

TEST_CASE("lexer marks code lines and skips comments") {
  const auto lexed = lex_java("int a;\n\n// note\n/* a\n b */ int c;\n   \n");
  REQUIRE(lexed.line_count == 6);
  CHECK(lexed.code_line[1]);
  CHECK_FALSE(lexed.code_line[2]);
  CHECK_FALSE(lexed.code_line[3]);
  CHECK_FALSE(lexed.code_line[4]);
  CHECK(lexed.code_line[5]);
  CHECK_FALSE(lexed.code_line[6]);
}

TEST_CASE("text blocks are single tokens covering every line") {
  const auto lexed = lex_java("String s = \"\"\"\n  hi\n  \"\"\";\n");
  REQUIRE(lexed.tokens.size() == 5);
  CHECK(lexed.tokens[3].kind == TokenKind::text_block);
  CHECK(lexed.tokens[3].line == 1);
  CHECK(lexed.tokens[3].end_line == 3);
  CHECK(lexed.code_line[2]);
}

TEST_CASE("preprocess_code drops comments and keeps punctuation") {
  CHECK(preprocess_code("int a = 1; // init") == "int a = 1 ;");
  CHECK(preprocess_code("x  =\n\t/* c */ y+1;") == "x = y + 1 ;");
  CHECK(preprocess_code("").empty());
}

TEST_CASE("preprocess_code keeps case and does not stem") {
  CHECK(preprocess_code("system.equals(System)") == "system . equals ( System )");
}

TEST_CASE("unterminated block comment removes the rest of the input") {
  CHECK(preprocess_code("int a; /* open\n int b;") == "int a ;");
}

TEST_CASE("preprocess_code is idempotent") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto code = random_fragment(rng);
    const auto once = preprocess_code(code);
    CAPTURE(code);
    CHECK(preprocess_code(once) == once);
  }
}

TEST_CASE("parse_ast nests class and method") {
  const auto root = parse_ast("class A { void m() {} }");
  CHECK(root.type == NodeType::other);
  REQUIRE(root.children.size() == 1);
  const auto& cls = root.children[0];
  CHECK(cls.type == NodeType::class_decl);
  CHECK(cls.start_line == 1);
  CHECK(cls.end_line == 1);
  REQUIRE(cls.children.size() == 1);
  CHECK(cls.children[0].type == NodeType::method);
}

TEST_CASE("top-level enum is a child of the root") {
  const auto root = parse_ast("enum Color {\n RED, GREEN\n}\n");
  REQUIRE(root.children.size() == 1);
  CHECK(root.children[0].type == NodeType::enum_decl);
  CHECK(root.end_line == 3);
}

TEST_CASE("braceless for still yields a loop node") {
  const std::string src =
      "class A {\n"
      "  void m(int[] xs) {\n"
      "    for (int x : xs)\n"
      "      use(x);\n"
      "  }\n"
      "}\n";
  const auto file = parse_file("A.java", src);
  REQUIRE(file.ast);
  const auto ces = extract_ces(file, {4, 4});
  CHECK(ces.node_type == NodeType::for_while_do);
  CHECK(ces.start_line == 3);
  CHECK(ces.end_line == 4);
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_ast("class A {\n  void m() {\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_ast("class A { int x = ; ) }"), ParseError);
}

TEST_CASE("child spans lie inside parent spans on the corpus") {
  for (const auto& golden : deepcva::testing::load_golden_corpus(DEEPCVA_TEST_DATA "/ces")) {
    CAPTURE(golden.path);
    const auto root = parse_ast(golden.source);
    walk(root, 0, [](const AstNode& node, int) {
      CHECK(node.start_line <= node.end_line);
      for (const auto& c : node.children) {
        CHECK(c.start_line >= node.start_line);
        CHECK(c.end_line <= node.end_line);
      }
    });
  }
}

TEST_CASE("extract_ces examples") {
  const std::string src =
      "class A {\n"             // 1
      "  static int k;\n"       // 2
      "  static {\n"            // 3
      "    k = 1;\n"            // 4
      "  }\n"                   // 5
      "  void f() {\n"          // 6
      "    k++;\n"              // 7
      "  }\n"                   // 8
      "  void g() {\n"          // 9
      "    k--;\n"              // 10
      "  }\n"                   // 11
      "}\n";                    // 12
  const auto file = parse_file("A.java", src);
  REQUIRE(file.ast);
  SUBCASE("change inside a method") {
    auto ces = extract_ces(file, {7, 7});
    CHECK(ces.node_type == NodeType::method);
    CHECK(ces.start_line == 6);
    CHECK(ces.end_line == 8);
    CHECK(ces.source_text == "  void f() {\n    k++;\n  }");
    CHECK(ces.effective_loc == 3);
  }
  SUBCASE("static initializer resolves to the class") {
    auto ces = extract_ces(file, {4, 4});
    CHECK(ces.node_type == NodeType::class_decl);
    CHECK(ces.start_line == 1);
    CHECK(ces.end_line == 12);
  }
  SUBCASE("hunk spanning two sibling methods resolves to the class") {
    auto ces = extract_ces(file, {7, 10});
    CHECK(ces.node_type == NodeType::class_decl);
  }
  CHECK_THROWS_AS(extract_ces(file, {11, 40}), std::out_of_range);
}

TEST_CASE("unparsable file falls back to a window") {
  std::string src;
  for (int i = 1; i <= 40; ++i) src += "x" + std::to_string(i) + " = (\n";
  const auto file = parse_file("Bad.java", src);
  CHECK_FALSE(file.ast);
  const auto ces = extract_ces(file, {20, 21});
  CHECK(ces.fallback);
  CHECK(ces.start_line == 10);
  CHECK(ces.end_line == 31);
  const auto edge = extract_ces(file, {3, 3});
  CHECK(edge.start_line == 1);
  CHECK(edge.end_line == 13);
}

TEST_CASE("golden corpus: extracted scopes match the annotations") {
  const auto corpus = deepcva::testing::load_golden_corpus(DEEPCVA_TEST_DATA "/ces");
  REQUIRE(corpus.size() >= 10);
  for (const auto& golden : corpus) {
    const auto file = parse_file(golden.path, golden.source);
    CAPTURE(golden.path);
    CAPTURE(file.parse_error);
    REQUIRE(file.ast);
    for (const auto& c : golden.cases) {
      CAPTURE(c.hunk_start);
      CAPTURE(c.hunk_end);
      const auto ces = extract_ces(file, {c.hunk_start, c.hunk_end});
      CHECK(std::string(node_type_name(ces.node_type)) == c.type);
      CHECK(ces.start_line == c.start);
      CHECK(ces.end_line == c.end);
    }
  }
}

TEST_CASE("CES contains the hunk and is minimal among candidates (fuzz)") {
  std::mt19937_64 rng(23);
  for (const auto& golden : deepcva::testing::load_golden_corpus(DEEPCVA_TEST_DATA "/ces")) {
    const auto file = parse_file(golden.path, golden.source);
    REQUIRE(file.ast);
    const int lines = static_cast<int>(file.lines.size());
    for (int trial = 0; trial < 100; ++trial) {
      int a = 1 + static_cast<int>(rng() % lines);
      int b = 1 + static_cast<int>(rng() % lines);
      if (a > b) std::swap(a, b);
      const auto ces = extract_ces(file, {a, b});
      CAPTURE(golden.path);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(ces.start_line <= a);
      CHECK(ces.end_line >= b);
      CHECK(ces.effective_loc >= 1);
      walk(*file.ast, 0, [&](const AstNode& node, int depth) {
        const bool candidate = depth == 0 || is_scope_type(node.type);
        if (!candidate || node.start_line > a || node.end_line < b) return;
        const int eloc = effective_loc(file.lexed.code_line, node.start_line, node.end_line);
        CHECK(ces.effective_loc <= std::max(1, eloc));
      });
    }
  }
}

TEST_CASE("a hunk directly inside a method body resolves to that method") {
  for (const auto& golden : deepcva::testing::load_golden_corpus(DEEPCVA_TEST_DATA "/ces")) {
    const auto file = parse_file(golden.path, golden.source);
    REQUIRE(file.ast);
    walk(*file.ast, 0, [&](const AstNode& node, int) {
      if (node.type != NodeType::method) return;
      for (int l = node.start_line + 1; l < node.end_line; ++l) {
        // Skip lines covered by a nested node.
        bool nested = false;
        walk(node, 0, [&](const AstNode& inner, int depth) {
          if (depth > 0 && inner.start_line <= l && inner.end_line >= l) nested = true;
        });
        if (nested) continue;
        CAPTURE(golden.path);
        CAPTURE(l);
        const auto ces = extract_ces(file, {l, l});
        CHECK(ces.node_type == NodeType::method);
        CHECK(ces.start_line == node.start_line);
      }
    });
  }
}

namespace {

miner::Hunk hunk(std::vector<miner::LineRef> del, std::vector<miner::LineRef> add) {
  miner::Hunk h;
  h.deleted = std::move(del);
  h.added = std::move(add);
  return h;
}

const char* kPreA =
    "class A {\n"
    "  int f(int x) {\n"
    "    return x + 1;\n"
    "  }\n"
    "}\n";
const char* kPostA =
    "class A {\n"
    "  int f(int x) {\n"
    "    return x - 1;\n"
    "  }\n"
    "}\n";

}  // namespace

TEST_CASE("build_inputs: commit with only additions has empty pre side") {
  miner::CommitRecord commit;
  miner::FileChange fc;
  fc.path_post = "A.java";
  fc.hunks.push_back(hunk({}, {{3, "    return x - 1;"}}));
  commit.files.push_back(fc);
  auto scopes = compute_scopes(commit, [](Side, const std::string&) {
    return std::optional<std::string>(kPostA);
  });
  const auto inputs = build_inputs(commit, scopes);
  CHECK(inputs.pre_hunks.empty());
  CHECK(inputs.pre_ctx.empty());
  CHECK(inputs.post_hunks == "return x - 1 ;");
}

TEST_CASE("build_inputs: one modified method gives that method as both contexts") {
  miner::CommitRecord commit;
  miner::FileChange fc;
  fc.path_pre = "A.java";
  fc.path_post = "A.java";
  fc.hunks.push_back(hunk({{3, "    return x + 1;"}}, {{3, "    return x - 1;"}}));
  commit.files.push_back(fc);
  auto scopes = compute_scopes(commit, [](Side side, const std::string&) {
    return std::optional<std::string>(side == Side::pre ? kPreA : kPostA);
  });
  REQUIRE(scopes.pre.size() == 1);
  REQUIRE(scopes.post.size() == 1);
  CHECK(scopes.pre[0].node_type == NodeType::method);
  const auto inputs = build_inputs(commit, scopes);
  CHECK(inputs.pre_hunks == "return x + 1 ;");
  CHECK(inputs.post_hunks == "return x - 1 ;");
  CHECK(inputs.pre_ctx == "int f ( int x ) { return x + 1 ; }");
  CHECK(inputs.post_ctx == "int f ( int x ) { return x - 1 ; }");
}

TEST_CASE("build_inputs: contexts follow the commit's file order") {
  miner::CommitRecord commit;
  for (const char* path : {"Z.java", "B.java"}) {
    miner::FileChange fc;
    fc.path_pre = path;
    fc.path_post = path;
    fc.hunks.push_back(hunk({{3, "    return x + 1;"}}, {{3, "    return x - 1;"}}));
    commit.files.push_back(fc);
  }
  auto scopes = compute_scopes(commit, [](Side side, const std::string& path) {
    std::string src = side == Side::pre ? kPreA : kPostA;
    src.replace(src.find('A'), 1, path.substr(0, 1));
    return std::optional<std::string>(src);
  });
  REQUIRE(scopes.post.size() == 2);
  CHECK(scopes.post[0].file_path == "Z.java");
  CHECK(scopes.post[1].file_path == "B.java");
  CHECK(scopes.post[1].hunk_ref == 1);
  const auto inputs = build_inputs(commit, scopes);
  CHECK(inputs.post_ctx ==
        "int f ( int x ) { return x - 1 ; } int f ( int x ) { return x - 1 ; }");
}

TEST_CASE("build_inputs: identical scopes on one side are emitted once") {
  miner::CommitRecord commit;
  miner::FileChange fc;
  fc.path_pre = "A.java";
  fc.path_post = "A.java";
  fc.hunks.push_back(hunk({{2, "  int f(int x) {"}}, {}));
  fc.hunks.push_back(hunk({{3, "    return x + 1;"}}, {}));
  commit.files.push_back(fc);
  auto scopes = compute_scopes(commit, [](Side, const std::string&) {
    return std::optional<std::string>(kPreA);
  });
  CHECK(scopes.pre.size() == 1);
}
