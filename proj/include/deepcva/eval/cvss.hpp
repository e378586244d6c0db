#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deepcva {

// The seven CVSS v2 base-metric tasks, in canonical order. Label indices follow
// the order returned by task_labels().
enum class Task : std::uint8_t {
  confidentiality,
  integrity,
  availability,
  access_vector,
  access_complexity,
  authentication,
  severity,
};

inline constexpr std::size_t kTaskCount = 7;

inline constexpr std::array<Task, kTaskCount> kAllTasks = {
    Task::confidentiality,   Task::integrity,      Task::availability, Task::access_vector,
    Task::access_complexity, Task::authentication, Task::severity,
};

class InvalidLabel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string_view task_name(Task task);
std::optional<Task> parse_task(std::string_view name);

/// Display names: impacts {None, Partial, Complete}; access vector
/// {Local, Adjacent Network, Network}; access complexity {Low, Medium, High};
/// authentication {None, Single, Multiple}; severity {Low, Medium, High}.
const std::vector<std::string>& task_labels(Task task);
std::size_t label_count(Task task);

/// Case-insensitive; spaces, '_' and '-' are ignored, and "Adjacent" is
/// accepted for "Adjacent Network". Throws InvalidLabel.
std::uint8_t parse_label(Task task, std::string_view text);
const std::string& label_name(Task task, std::uint8_t index);

struct CvssAssessment {
  std::array<std::uint8_t, kTaskCount> values{};

  std::uint8_t& operator[](Task t) { return values[static_cast<std::size_t>(t)]; }
  std::uint8_t operator[](Task t) const { return values[static_cast<std::size_t>(t)]; }
  bool operator==(const CvssAssessment&) const = default;
  auto operator<=>(const CvssAssessment&) const = default;
};

/// Throws InvalidLabel when any field is out of range for its task.
void validate(const CvssAssessment& labels);

}  // namespace deepcva
