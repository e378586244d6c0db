#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepcva/model/config.hpp"

namespace deepcva::cli {

/// A configuration value or file that cannot be understood; names the key.
class ConfigParse : public std::runtime_error {
 public:
  ConfigParse(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Every key a config file, environment variable or flag may set.
const std::vector<std::string>& known_keys();

/// DEEPCVA_ plus the key upper-cased with '-' as '_': max_vocab → DEEPCVA_MAX_VOCAB.
std::string env_name(const std::string& key);

/// Layered settings. Lookups take the first layer holding the key:
/// command-line flag, then environment, then config file; callers supply the
/// default.
class Settings {
 public:
  /// Flat `key = value` lines; '#' starts a comment; blank lines are skipped.
  /// Unknown keys and repeated keys are ConfigParse errors.
  void load_file(const std::filesystem::path& path);
  void parse_text(const std::string& text, const std::string& origin);
  /// Reads DEEPCVA_<KEY> for every known key via getenv.
  void load_env();
  void set_env(const std::string& key, std::string value) { env_[key] = std::move(value); }
  void set_flag(const std::string& key, std::string value) { flags_[key] = std::move(value); }

  std::optional<std::string> raw(const std::string& key) const;
  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  /// Throws ConfigParse when the key is not set anywhere.
  std::string require(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  /// true/false, yes/no, on/off, 1/0.
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated unsigned integers.
  std::vector<std::size_t> get_uint_list(const std::string& key, std::vector<std::size_t> fallback) const;

 private:
  std::map<std::string, std::string> file_, env_, flags_;
};

/// Model hyperparameters with the ablation switches applied: no_attention,
/// hunks_only (two inputs) and filter_sizes.
model::ModelConfig model_config(const Settings& settings);

}  // namespace deepcva::cli
