#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepcva/miner/commit.hpp"
#include "deepcva/model/model.hpp"
#include "deepcva/tokenizer/encode.hpp"

namespace deepcva::io {

using Json = nlohmann::ordered_json;

/// A record is missing a field or holds a value of the wrong type or range.
/// `field()` is the dotted path of the offending field.
class SchemaViolation : public std::runtime_error {
 public:
  SchemaViolation(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class MissingInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts YYYY-MM-DD, YYYY-MM-DDTHH:MM[:SS[.fff]] with Z, ±HH:MM or no zone
/// (read as UTC). Returns UTC seconds; throws std::invalid_argument.
std::int64_t parse_iso8601(const std::string& text);
/// YYYY-MM-DDTHH:MM:SSZ.
std::string format_iso8601(std::int64_t utc_seconds);

/// Labels as an object of seven strings keyed by task name.
Json labels_to_json(const CvssAssessment& labels);
CvssAssessment labels_from_json(const Json& j, const std::string& where = "labels");

Json commit_files_to_json(const std::vector<miner::FileChange>& files);
std::vector<miner::FileChange> commit_files_from_json(const Json& j, const std::string& where = "files");

/// VCC corpus row: repo_id, commit_hash, timestamp, files, labels,
/// label_conflict (plus parent_hashes when known).
Json vcc_to_json(const miner::VccRecord& record);
miner::VccRecord vcc_from_json(const Json& j);

/// VFC manifest row (repo_id, commit_hash, advisory_id, published_date,
/// labels). Mined rows add timestamp, parent_hashes and files.
Json vfc_to_json(const miner::VfcRecord& record);
miner::VfcRecord vfc_from_json(const Json& j);

/// The four preprocessed inputs of one commit with its labels.
struct CommitText {
  std::string commit_id;
  std::int64_t timestamp = 0;
  std::array<std::string, tokenizer::kInputCount> inputs;  // in kInputNames order
  CvssAssessment labels;
  bool label_conflict = false;
};

std::string commit_id(const std::string& repo_id, const std::string& commit_hash);

Json commit_text_to_json(const CommitText& record);
CommitText commit_text_from_json(const Json& j);

/// ids per input keyed by input name; masks are implied by PAD.
Json encoded_to_json(const tokenizer::EncodedCommit& record);
tokenizer::EncodedCommit encoded_from_json(const Json& j);

/// {commit_id, <task>: {label, probs}} with labels as text.
Json prediction_to_json(const std::string& commit_id, const model::Prediction& prediction,
                        const std::vector<model::TaskSpec>& tasks);

/// Parses each non-blank line; errors carry "<path>:<line>: ". Throws
/// MissingInput when the file cannot be opened.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

template <typename T>
std::vector<T> read_jsonl_as(const std::filesystem::path& path, T (*parse)(const Json&)) {
  std::vector<T> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      out.push_back(parse(j));
    } catch (const SchemaViolation& e) {
      throw SchemaViolation(e.field(), path.string() + ": record " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

/// One compact JSON document per line, written atomically.
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

}  // namespace deepcva::io
