#include "deepcva/cli/settings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace deepcva::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw ConfigParse(key, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      // model
      "n", "l", "vocab_size", "filter_sizes", "f", "gru_hidden", "attn_hidden", "task_hidden", "dropout",
      // ablations
      "no_attention", "hunks_only", "single_task", "severity_from_formula",
      // training and protocol
      "seed", "epochs", "batch_size", "lr", "patience", "min_delta", "folds", "rounds", "repeats",
      "max_vocab", "threads",
      // mining
      "repo", "repo_id", "max_files", "max_lines",
      // baselines
      "model", "features", "classifier", "oversample", "smote_k",
      // paths
      "manifest", "corpus", "vocab", "data", "checkpoint", "out", "log_level"};
  return keys;
}

std::string env_name(const std::string& key) {
  std::string out = "DEEPCVA_";
  for (char c : key) out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

void Settings::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  parse_text(ss.str(), path.string());
}

void Settings::parse_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = origin + ":" + std::to_string(no);
    if (eq == std::string::npos) throw ConfigParse("", where + ": expected 'key = value'");
    auto key = trim(std::string_view(line).substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    const auto value = trim(std::string_view(line).substr(eq + 1));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigParse(key, where + ": unknown key");
    }
    if (!file_.emplace(key, value).second) throw ConfigParse(key, where + ": repeated key");
  }
}

void Settings::load_env() {
  for (const auto& key : known_keys()) {
    if (const char* v = std::getenv(env_name(key).c_str())) env_[key] = v;
  }
}

std::optional<std::string> Settings::raw(const std::string& key) const {
  for (const auto* layer : {&flags_, &env_, &file_}) {
    if (auto it = layer->find(key); it != layer->end()) return it->second;
  }
  return std::nullopt;
}

std::string Settings::get_string(const std::string& key, const std::string& fallback) const {
  return raw(key).value_or(fallback);
}

std::string Settings::require(const std::string& key) const {
  auto v = raw(key);
  if (!v || v->empty()) throw ConfigParse(key, "required but not set (flag --" + key + ", " + env_name(key) + " or config file)");
  return *v;
}

std::uint64_t Settings::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto v = raw(key);
  return v ? parse_uint(key, trim(*v)) : fallback;
}

double Settings::get_double(const std::string& key, double fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  const auto text = trim(*v);
  char* end = nullptr;
  const double d = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigParse(key, "expected a number, got '" + *v + "'");
  }
  return d;
}

bool Settings::get_bool(const std::string& key, bool fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  const auto t = lower(trim(*v));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigParse(key, "expected a boolean, got '" + *v + "'");
}

std::vector<std::size_t> Settings::get_uint_list(const std::string& key, std::vector<std::size_t> fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  std::vector<std::size_t> out;
  std::istringstream in(*v);
  for (std::string part; std::getline(in, part, ',');) out.push_back(parse_uint(key, trim(part)));
  if (out.empty()) throw ConfigParse(key, "expected a comma-separated list");
  return out;
}

model::ModelConfig model_config(const Settings& s) {
  model::ModelConfig c;
  c.n = s.get_uint("n", c.n);
  c.l = s.get_uint("l", c.l);
  c.vocab_size = s.get_uint("vocab_size", c.vocab_size);
  c.filter_sizes = s.get_uint_list("filter_sizes", c.filter_sizes);
  c.f = s.get_uint("f", c.f);
  c.gru_hidden = s.get_uint("gru_hidden", c.gru_hidden);
  c.attn_hidden = s.get_uint("attn_hidden", c.attn_hidden);
  c.task_hidden = s.get_uint("task_hidden", c.task_hidden);
  c.dropout_rate = s.get_double("dropout", c.dropout_rate);
  c.attention = !s.get_bool("no_attention", false);
  c.inputs = s.get_bool("hunks_only", false) ? 2 : 4;
  return c;
}

}  // namespace deepcva::cli
