#include "deepcva/tokenizer/encode.hpp"

#include "deepcva/tokenizer/tokenizer.hpp"

namespace deepcva::tokenizer {

std::vector<std::int32_t> encode_text(const std::string& code, const Vocabulary& vocab,
                                      std::size_t n) {
  std::vector<std::int32_t> ids(n, kPadId);
  const auto tokens = tokenize(code);
  for (std::size_t i = 0; i < std::min(n, tokens.size()); ++i) ids[i] = vocab.id(tokens[i]);
  return ids;
}

EncodedCommit encode(const std::array<std::string, kInputCount>& inputs, const Vocabulary& vocab,
                     std::size_t n) {
  EncodedCommit enc;
  for (std::size_t k = 0; k < kInputCount; ++k) {
    enc.ids[k] = encode_text(inputs[k], vocab, n);
    enc.masks[k].resize(n);
    for (std::size_t i = 0; i < n; ++i) enc.masks[k][i] = enc.ids[k][i] != kPadId;
  }
  return enc;
}

std::vector<std::string> decode(const std::vector<std::int32_t>& ids, const Vocabulary& vocab) {
  std::vector<std::string> tokens;
  for (auto id : ids) {
    if (id != kPadId) tokens.push_back(vocab.token(id));
  }
  return tokens;
}

}  // namespace deepcva::tokenizer
