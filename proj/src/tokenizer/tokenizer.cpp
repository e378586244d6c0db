#include "deepcva/tokenizer/tokenizer.hpp"

#include "deepcva/context/java_lexer.hpp"
#include "deepcva/context/preprocess.hpp"

namespace deepcva::tokenizer {

std::vector<std::string> tokenize(std::string_view code) {
  const auto lexed = context::lex_java(code);
  std::vector<std::string> out;
  out.reserve(lexed.tokens.size());
  for (const auto& token : lexed.tokens) out.push_back(context::canonical_text(token));
  return out;
}

}  // namespace deepcva::tokenizer
