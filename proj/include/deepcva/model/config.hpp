#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepcva/eval/cvss.hpp"

namespace deepcva::model {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TaskSpec {
  std::string name;
  std::size_t n_labels;
  bool operator==(const TaskSpec&) const = default;
};

/// The seven CVSS tasks with their label counts.
std::vector<TaskSpec> cvss_tasks();

struct ModelConfig {
  std::size_t n = 1024;            // tokens per input
  std::size_t l = 300;             // embedding width
  std::size_t vocab_size = 10002;  // including PAD and UNK
  std::vector<std::size_t> filter_sizes = {1, 3, 5};
  std::size_t f = 128;  // filters per size
  std::size_t gru_hidden = 128;
  std::size_t attn_hidden = 128;
  std::size_t task_hidden = 128;
  std::vector<TaskSpec> tasks = cvss_tasks();
  double dropout_rate = 0.2;
  /// false replaces attention pooling with the GRU state at the last real token.
  bool attention = true;
  /// 4 feeds hunks and contexts; 2 feeds only pre/post hunks.
  std::size_t inputs = 4;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::size_t commit_vector_size() const { return inputs * filter_sizes.size() * gru_hidden; }

  /// Stable `key=value` lines; equal configs give equal text.
  std::string canonical() const;
  static ModelConfig from_canonical(const std::string& text);

  bool operator==(const ModelConfig&) const = default;
};

/// Task of a head, or nullopt for a name that is not a CVSS task.
std::optional<Task> task_of(const TaskSpec& spec);

}  // namespace deepcva::model
