#include "deepcva/tokenizer/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "deepcva/io/atomic_file.hpp"
#include "deepcva/tokenizer/tokenizer.hpp"

namespace deepcva::tokenizer {

namespace {
const std::string kPadToken = "<pad>";
const std::string kUnkToken = "<unk>";
}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const auto id = static_cast<std::int32_t>(i + kReservedIds);
    if (!ids_.emplace(tokens_[i], id).second) {
      throw std::invalid_argument("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

std::int32_t Vocabulary::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id == kPadId) return kPadToken;
  if (id == kUnkId) return kUnkToken;
  const auto index = static_cast<std::size_t>(id) - kReservedIds;
  if (id < 0 || index >= tokens_.size()) {
    throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary");
  }
  return tokens_[index];
}

Vocabulary build_vocab(std::span<const std::string> documents, std::size_t max_size) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : documents) {
    for (auto& token : tokenize(doc)) ++counts[std::move(token)];
  }
  if (counts.empty()) throw EmptyCorpus("cannot build a vocabulary from an empty corpus");
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // `counts` iterates lexicographically, so a stable sort by count keeps the
  // lexicographic tie order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_size) ranked.resize(max_size);
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [token, count] : ranked) tokens.push_back(std::move(token));
  return Vocabulary(std::move(tokens));
}

void save_vocab(const std::filesystem::path& path, const Vocabulary& vocab) {
  std::string text;
  for (const auto& token : vocab.tokens()) text += token + '\n';
  io::write_file_atomic(path, text);
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read vocabulary " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) tokens.push_back(line);
  return Vocabulary(std::move(tokens));
}

}  // namespace deepcva::tokenizer
