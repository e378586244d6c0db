#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace deepcva::tokenizer {

inline constexpr std::int32_t kPadId = 0;
inline constexpr std::int32_t kUnkId = 1;
inline constexpr std::size_t kReservedIds = 2;
inline constexpr std::size_t kDefaultVocabSize = 10000;

class EmptyCorpus : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  /// `tokens` in id order starting at kReservedIds; must be distinct.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::int32_t id(const std::string& token) const;
  /// "<pad>" and "<unk>" for the reserved ids.
  const std::string& token(std::int32_t id) const;
  /// Including the two reserved ids.
  std::size_t size() const { return tokens_.size() + kReservedIds; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

/// Keeps the `max_size` most frequent tokens across every document, ties
/// broken by lexicographic order. Documents are tokenized with tokenize().
/// Throws EmptyCorpus when there are no tokens at all.
Vocabulary build_vocab(std::span<const std::string> documents,
                       std::size_t max_size = kDefaultVocabSize);

/// One token per line; the token on line k gets id k + 1 (PAD and UNK are
/// implicit). Writes atomically.
void save_vocab(const std::filesystem::path& path, const Vocabulary& vocab);
Vocabulary load_vocab(const std::filesystem::path& path);

}  // namespace deepcva::tokenizer
