#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "deepcva/eval/cvss.hpp"
#include "deepcva/tokenizer/vocab.hpp"

namespace deepcva::tokenizer {

/// Input order used everywhere: pre_hunks, post_hunks, pre_ctx, post_ctx.
inline constexpr std::size_t kInputCount = 4;
inline constexpr std::array<const char*, kInputCount> kInputNames = {"pre_hunks", "post_hunks",
                                                                     "pre_ctx", "post_ctx"};
inline constexpr std::size_t kDefaultLength = 1024;

struct EncodedCommit {
  std::string commit_id;
  std::int64_t timestamp = 0;
  std::array<std::vector<std::int32_t>, kInputCount> ids;
  std::array<std::vector<std::uint8_t>, kInputCount> masks;  // 1 = real token
  CvssAssessment labels;
  bool label_conflict = false;
};

/// Token ids of one input: the first `n` tokens, then PAD up to `n`.
std::vector<std::int32_t> encode_text(const std::string& code, const Vocabulary& vocab,
                                      std::size_t n);

EncodedCommit encode(const std::array<std::string, kInputCount>& inputs, const Vocabulary& vocab,
                     std::size_t n = kDefaultLength);

/// Tokens of the non-PAD ids.
std::vector<std::string> decode(const std::vector<std::int32_t>& ids, const Vocabulary& vocab);

}  // namespace deepcva::tokenizer
