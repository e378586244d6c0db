#include "deepcva/io/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <regex>

#include <fmt/format.h>

#include "deepcva/io/atomic_file.hpp"

namespace deepcva::io {

namespace {

std::string join(const std::string& where, const std::string& field) {
  return where.empty() ? field : where + "." + field;
}

const Json& require(const Json& j, const std::string& where, const std::string& field) {
  if (!j.is_object()) throw SchemaViolation(where, "'" + where + "' must be an object");
  auto it = j.find(field);
  const auto path = join(where, field);
  if (it == j.end() || it->is_null()) throw SchemaViolation(path, "missing field '" + path + "'");
  return *it;
}

std::string get_string(const Json& j, const std::string& where, const std::string& field) {
  const auto& v = require(j, where, field);
  if (!v.is_string()) throw SchemaViolation(join(where, field), "'" + join(where, field) + "' must be a string");
  return v.get<std::string>();
}

std::int64_t get_int(const Json& j, const std::string& where, const std::string& field) {
  const auto& v = require(j, where, field);
  if (!v.is_number_integer()) {
    throw SchemaViolation(join(where, field), "'" + join(where, field) + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

bool get_bool(const Json& j, const std::string& where, const std::string& field, bool fallback) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) throw SchemaViolation(join(where, field), "'" + join(where, field) + "' must be a boolean");
  return it->get<bool>();
}

std::optional<std::string> get_optional_path(const Json& j, const std::string& where, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaViolation(join(where, field), "'" + join(where, field) + "' must be a string or null");
  return it->get<std::string>();
}

Json lines_to_json(const std::vector<miner::LineRef>& lines) {
  Json out = Json::array();
  for (const auto& l : lines) out.push_back(Json::array({l.line, l.text}));
  return out;
}

std::vector<miner::LineRef> lines_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaViolation(where, "'" + where + "' must be an array");
  std::vector<miner::LineRef> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_string()) {
      throw SchemaViolation(where, "'" + where + "' entries must be [line, text]");
    }
    out.push_back({e[0].get<int>(), e[1].get<std::string>()});
  }
  return out;
}

std::vector<std::string> string_list(const Json& j, const std::string& where, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_array()) throw SchemaViolation(join(where, field), "'" + join(where, field) + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : *it) {
    if (!e.is_string()) throw SchemaViolation(join(where, field), "'" + join(where, field) + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

std::int64_t parse_iso8601(const std::string& text) {
  static const std::regex re(
      R"((\d{4})-(\d{2})-(\d{2})(?:[T ](\d{2}):(\d{2})(?::(\d{2})(?:\.\d+)?)?)?(Z|[+-]\d{2}:?\d{2})?)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw std::invalid_argument("not an ISO-8601 date: '" + text + "'");
  using namespace std::chrono;
  const year_month_day ymd{year{std::stoi(m[1])}, month{static_cast<unsigned>(std::stoi(m[2]))},
                           day{static_cast<unsigned>(std::stoi(m[3]))}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date: '" + text + "'");
  const int hh = m[4].matched ? std::stoi(m[4]) : 0;
  const int mm = m[5].matched ? std::stoi(m[5]) : 0;
  const int ss = m[6].matched ? std::stoi(m[6]) : 0;
  if (hh > 23 || mm > 59 || ss > 60) throw std::invalid_argument("invalid time of day: '" + text + "'");
  std::int64_t offset = 0;
  if (m[7].matched && m[7].str() != "Z") {
    std::string z = m[7].str();
    z.erase(std::remove(z.begin(), z.end(), ':'), z.end());
    const int sign = z[0] == '-' ? -1 : 1;
    offset = sign * (std::stoi(z.substr(1, 2)) * 3600 + std::stoi(z.substr(3, 2)) * 60);
  }
  const auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

std::string format_iso8601(std::int64_t utc_seconds) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(sys_seconds{seconds{utc_seconds}});
  const year_month_day ymd{days};
  const auto rest = utc_seconds - days.time_since_epoch().count() * 86400LL;
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), rest / 3600,
                     rest / 60 % 60, rest % 60);
}

Json labels_to_json(const CvssAssessment& labels) {
  Json out = Json::object();
  for (auto t : kAllTasks) out[std::string(task_name(t))] = label_name(t, labels[t]);
  return out;
}

CvssAssessment labels_from_json(const Json& j, const std::string& where) {
  CvssAssessment out;
  for (auto t : kAllTasks) {
    const std::string field(task_name(t));
    const auto text = get_string(j, where, field);
    try {
      out.values[static_cast<std::size_t>(t)] = parse_label(t, text);
    } catch (const InvalidLabel& e) {
      throw SchemaViolation(join(where, field), e.what());
    }
  }
  return out;
}

Json commit_files_to_json(const std::vector<miner::FileChange>& files) {
  Json out = Json::array();
  for (const auto& f : files) {
    Json jf;
    jf["path_pre"] = f.path_pre ? Json(*f.path_pre) : Json(nullptr);
    jf["path_post"] = f.path_post ? Json(*f.path_post) : Json(nullptr);
    if (f.rename_detected) jf["rename_detected"] = true;
    jf["hunks"] = Json::array();
    for (const auto& h : f.hunks) {
      Json jh;
      jh["del"] = lines_to_json(h.deleted);
      jh["add"] = lines_to_json(h.added);
      jh["old_start"] = h.old_start;
      jh["old_count"] = h.old_count;
      jh["new_start"] = h.new_start;
      jh["new_count"] = h.new_count;
      if (h.unverified) jh["unverified"] = true;
      jf["hunks"].push_back(std::move(jh));
    }
    out.push_back(std::move(jf));
  }
  return out;
}

std::vector<miner::FileChange> commit_files_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaViolation(where, "'" + where + "' must be an array");
  std::vector<miner::FileChange> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto w = where + "[" + std::to_string(i) + "]";
    const auto& jf = j[i];
    if (!jf.is_object()) throw SchemaViolation(w, "'" + w + "' must be an object");
    miner::FileChange f;
    f.path_pre = get_optional_path(jf, w, "path_pre");
    f.path_post = get_optional_path(jf, w, "path_post");
    if (!f.path_pre && !f.path_post) throw SchemaViolation(w + ".path_post", "'" + w + "' has neither path_pre nor path_post");
    f.rename_detected = get_bool(jf, w, "rename_detected", false);
    const auto& hunks = require(jf, w, "hunks");
    if (!hunks.is_array()) throw SchemaViolation(w + ".hunks", "'" + w + ".hunks' must be an array");
    for (std::size_t k = 0; k < hunks.size(); ++k) {
      const auto hw = w + ".hunks[" + std::to_string(k) + "]";
      miner::Hunk h;
      h.deleted = lines_from_json(require(hunks[k], hw, "del"), hw + ".del");
      h.added = lines_from_json(require(hunks[k], hw, "add"), hw + ".add");
      const auto opt_int = [&](const char* name, int& slot) {
        auto it = hunks[k].find(name);
        if (it != hunks[k].end() && it->is_number_integer()) slot = it->get<int>();
      };
      opt_int("old_start", h.old_start);
      opt_int("old_count", h.old_count);
      opt_int("new_start", h.new_start);
      opt_int("new_count", h.new_count);
      h.unverified = get_bool(hunks[k], hw, "unverified", false);
      f.hunks.push_back(std::move(h));
    }
    out.push_back(std::move(f));
  }
  return out;
}

Json vcc_to_json(const miner::VccRecord& r) {
  Json out;
  out["repo_id"] = r.commit.repo_id;
  out["commit_hash"] = r.commit.commit_hash;
  out["parent_hashes"] = r.commit.parent_hashes;
  out["timestamp"] = r.commit.author_timestamp;
  out["files"] = commit_files_to_json(r.commit.files);
  out["labels"] = labels_to_json(r.labels);
  out["label_conflict"] = r.label_conflict;
  return out;
}

miner::VccRecord vcc_from_json(const Json& j) {
  miner::VccRecord r;
  r.commit.repo_id = get_string(j, "", "repo_id");
  r.commit.commit_hash = get_string(j, "", "commit_hash");
  r.commit.parent_hashes = string_list(j, "", "parent_hashes");
  r.commit.author_timestamp = get_int(j, "", "timestamp");
  r.commit.files = commit_files_from_json(require(j, "", "files"));
  r.labels = labels_from_json(require(j, "", "labels"));
  r.label_conflict = get_bool(j, "", "label_conflict", false);
  return r;
}

Json vfc_to_json(const miner::VfcRecord& r) {
  Json out;
  out["repo_id"] = r.commit.repo_id;
  out["commit_hash"] = r.commit.commit_hash;
  out["advisory_id"] = r.advisory_id;
  out["published_date"] = format_iso8601(r.sv_published_date);
  out["labels"] = labels_to_json(r.labels);
  out["parent_hashes"] = r.commit.parent_hashes;
  out["timestamp"] = r.commit.author_timestamp;
  out["files"] = commit_files_to_json(r.commit.files);
  return out;
}

miner::VfcRecord vfc_from_json(const Json& j) {
  miner::VfcRecord r;
  r.commit.repo_id = get_string(j, "", "repo_id");
  r.commit.commit_hash = get_string(j, "", "commit_hash");
  r.advisory_id = get_string(j, "", "advisory_id");
  const auto date = get_string(j, "", "published_date");
  try {
    r.sv_published_date = parse_iso8601(date);
  } catch (const std::invalid_argument& e) {
    throw SchemaViolation("published_date", e.what());
  }
  r.labels = labels_from_json(require(j, "", "labels"));
  r.commit.parent_hashes = string_list(j, "", "parent_hashes");
  if (j.contains("timestamp")) r.commit.author_timestamp = get_int(j, "", "timestamp");
  if (j.contains("files")) r.commit.files = commit_files_from_json(j["files"]);
  return r;
}

std::string commit_id(const std::string& repo_id, const std::string& commit_hash) {
  return repo_id.empty() ? commit_hash : repo_id + ":" + commit_hash;
}

Json commit_text_to_json(const CommitText& r) {
  Json out;
  out["commit_id"] = r.commit_id;
  out["timestamp"] = r.timestamp;
  for (std::size_t i = 0; i < tokenizer::kInputCount; ++i) out[tokenizer::kInputNames[i]] = r.inputs[i];
  out["labels"] = labels_to_json(r.labels);
  out["label_conflict"] = r.label_conflict;
  return out;
}

CommitText commit_text_from_json(const Json& j) {
  CommitText r;
  r.commit_id = get_string(j, "", "commit_id");
  r.timestamp = get_int(j, "", "timestamp");
  for (std::size_t i = 0; i < tokenizer::kInputCount; ++i) r.inputs[i] = get_string(j, "", tokenizer::kInputNames[i]);
  r.labels = labels_from_json(require(j, "", "labels"));
  r.label_conflict = get_bool(j, "", "label_conflict", false);
  return r;
}

Json encoded_to_json(const tokenizer::EncodedCommit& r) {
  Json out;
  out["commit_id"] = r.commit_id;
  out["timestamp"] = r.timestamp;
  Json ids = Json::object();
  for (std::size_t i = 0; i < tokenizer::kInputCount; ++i) ids[tokenizer::kInputNames[i]] = r.ids[i];
  out["ids"] = std::move(ids);
  out["labels"] = labels_to_json(r.labels);
  out["label_conflict"] = r.label_conflict;
  return out;
}

tokenizer::EncodedCommit encoded_from_json(const Json& j) {
  tokenizer::EncodedCommit r;
  r.commit_id = get_string(j, "", "commit_id");
  r.timestamp = get_int(j, "", "timestamp");
  const auto& ids = require(j, "", "ids");
  std::size_t length = 0;
  for (std::size_t i = 0; i < tokenizer::kInputCount; ++i) {
    const std::string name = tokenizer::kInputNames[i];
    const auto& seq = require(ids, "ids", name);
    if (!seq.is_array()) throw SchemaViolation("ids." + name, "'ids." + name + "' must be an array");
    for (const auto& v : seq) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw SchemaViolation("ids." + name, "'ids." + name + "' must hold non-negative integers");
      }
      r.ids[i].push_back(v.get<std::int32_t>());
      r.masks[i].push_back(r.ids[i].back() != tokenizer::kPadId);
    }
    if (i == 0) length = r.ids[i].size();
    if (r.ids[i].size() != length) {
      throw SchemaViolation("ids." + name, "'ids." + name + "' length differs from the other inputs");
    }
  }
  r.labels = labels_from_json(require(j, "", "labels"));
  r.label_conflict = get_bool(j, "", "label_conflict", false);
  return r;
}

Json prediction_to_json(const std::string& id, const model::Prediction& prediction,
                        const std::vector<model::TaskSpec>& tasks) {
  Json out;
  out["commit_id"] = id;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& p = prediction.tasks.at(i);
    Json entry;
    const auto task = model::task_of(tasks[i]);
    entry["label"] = task ? Json(label_name(*task, static_cast<std::uint8_t>(p.label))) : Json(p.label);
    entry["probs"] = p.probs;
    out[tasks[i].name] = std::move(entry);
  }
  return out;
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open " + path.string());
  std::vector<Json> out;
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw SchemaViolation("", path.string() + ":" + std::to_string(n) + ": invalid JSON: " + e.what());
    }
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows) {
  std::string text;
  for (const auto& r : rows) {
    text += r.dump();
    text += '\n';
  }
  write_file_atomic(path, text);
}

}  // namespace deepcva::io
