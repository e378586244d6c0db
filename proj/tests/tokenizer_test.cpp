#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "deepcva/context/preprocess.hpp"
#include "deepcva/tokenizer/encode.hpp"
#include "deepcva/tokenizer/tokenizer.hpp"
#include "deepcva/tokenizer/vocab.hpp"

using namespace deepcva::tokenizer;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize examples") {
  CHECK(tokenize("a++") == Tokens{"a", "++"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("x>=y;") == Tokens{"x", ">=", "y", ";"});
  CHECK(tokenize("a++ + b++") == Tokens{"a", "++", "+", "b", "++"});
  CHECK(tokenize("s = \"two words\";") == Tokens{"s", "=", "\"two words\"", ";"});
  CHECK(tokenize("getFooBar") == Tokens{"getFooBar"});
}

TEST_CASE("tokenize agrees with preprocessed text") {
  const std::string code = "if (a == b) { c -> d; } // done";
  CHECK(tokenize(deepcva::context::preprocess_code(code)) == tokenize(code));
}

TEST_CASE("build_vocab: three distinct tokens") {
  std::vector<std::string> docs = {"a b c a"};
  const auto vocab = build_vocab(docs);
  CHECK(vocab.size() == 5);
  CHECK(vocab.id("a") == 2);
}

TEST_CASE("build_vocab: ties at the cutoff keep the lexicographically smaller token") {
  std::vector<std::string> docs = {"z z y y x x w"};
  const auto vocab = build_vocab(docs, 2);
  CHECK(vocab.tokens() == Tokens{"x", "y"});
  CHECK(vocab.id("z") == kUnkId);
  CHECK(vocab.size() <= 2 + kReservedIds);
}

TEST_CASE("build_vocab rejects an empty corpus") {
  std::vector<std::string> docs = {"", "  // only a comment"};
  CHECK_THROWS_AS(build_vocab(docs), EmptyCorpus);
}

TEST_CASE("token seen only outside training folds maps to UNK") {
  std::vector<std::string> train = {"int a = 1 ;"};
  const auto vocab = build_vocab(train);
  const auto ids = encode_text("int secret = 1 ;", vocab, 8);
  CHECK(ids[1] == kUnkId);
  CHECK(ids[0] == vocab.id("int"));
}

TEST_CASE("encode pads, truncates and masks") {
  std::vector<std::string> docs = {"a b c"};
  const auto vocab = build_vocab(docs);
  SUBCASE("short input is post-padded") {
    const auto enc = encode({"a b c", "", "", ""}, vocab, 8);
    CHECK(enc.ids[0] == std::vector<std::int32_t>{2, 3, 4, 0, 0, 0, 0, 0});
    CHECK(enc.masks[0] == std::vector<std::uint8_t>{1, 1, 1, 0, 0, 0, 0, 0});
    CHECK(enc.ids[1] == std::vector<std::int32_t>(8, kPadId));
  }
  SUBCASE("long input keeps the head") {
    std::string code;
    for (int i = 0; i < 2000; ++i) code += (i < 1024 ? "a " : "b ");
    const auto enc = encode({code, code, code, code}, vocab, 1024);
    for (const auto& ids : enc.ids) {
      REQUIRE(ids.size() == 1024);
      CHECK(std::all_of(ids.begin(), ids.end(), [&](auto id) { return id == vocab.id("a"); }));
    }
  }
  SUBCASE("out-of-vocabulary token") {
    const auto enc = encode({"zzz", "", "", ""}, vocab, 2);
    CHECK(enc.ids[0][0] == kUnkId);
    CHECK(enc.masks[0][0] == 1);
  }
}

TEST_CASE("decode(encode(x)) reproduces the head of in-vocabulary input") {
  std::mt19937_64 rng(5);
  const Tokens pool = {"a", "b", "++", "==", "(", ")", "x1", ";"};
  std::vector<std::string> docs;
  std::string all;
  for (const auto& t : pool) all += t + " ";
  docs.push_back(all);
  const auto vocab = build_vocab(docs);
  for (int trial = 0; trial < 200; ++trial) {
    Tokens tokens;
    std::string code;
    const auto len = rng() % 30;
    for (std::size_t i = 0; i < len; ++i) {
      tokens.push_back(pool[rng() % pool.size()]);
      code += tokens.back() + " ";
    }
    const std::size_t n = 1 + rng() % 20;
    const auto ids = encode_text(code, vocab, n);
    const Tokens head(tokens.begin(), tokens.begin() + std::min(n, tokens.size()));
    CHECK(decode(ids, vocab) == head);
    CHECK(encode_text(code, vocab, n) == ids);
    const auto enc = encode({code, "", "", ""}, vocab, n);
    for (std::size_t i = 0; i < n; ++i) CHECK((enc.masks[0][i] == 0) == (enc.ids[0][i] == kPadId));
  }
}

TEST_CASE("vocabulary file round-trips") {
  std::vector<std::string> docs = {"b a c a \"q r\""};
  const auto vocab = build_vocab(docs);
  const auto path = std::filesystem::temp_directory_path() / "deepcva_vocab_test.txt";
  save_vocab(path, vocab);
  const auto back = load_vocab(path);
  CHECK(back == vocab);
  CHECK(back.id("\"q r\"") == vocab.id("\"q r\""));
  std::filesystem::remove(path);
}
