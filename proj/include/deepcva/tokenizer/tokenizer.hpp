#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace deepcva::tokenizer {

/// Splits code at whitespace, operator and punctuation boundaries. Operators
/// such as `++`, `==`, `->` and `>=` stay whole, string literals are single
/// tokens, and identifiers are never split further (no camelCase splitting).
std::vector<std::string> tokenize(std::string_view code);

}  // namespace deepcva::tokenizer
