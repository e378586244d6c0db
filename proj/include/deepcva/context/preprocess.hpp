#pragma once

#include <string>
#include <string_view>

#include "deepcva/context/java_lexer.hpp"

namespace deepcva::context {

/// Drops comments and rejoins the remaining Java tokens with single spaces, so
/// `int a = 1; // init` becomes `int a = 1 ;`. Case and punctuation are kept
/// and nothing is stemmed. An unterminated block comment swallows the rest of
/// the input and logs a warning. Idempotent.
std::string preprocess_code(std::string_view source);

/// Token text as it appears in preprocessed output: text-block whitespace is
/// collapsed and an unterminated literal gets its closing quote.
std::string canonical_text(const Token& token);

}  // namespace deepcva::context
