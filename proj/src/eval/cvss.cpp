#include "deepcva/eval/cvss.hpp"

#include <cctype>

namespace deepcva {

namespace {

const std::array<std::string_view, kTaskCount> kTaskNames = {
    "confidentiality",   "integrity",      "availability", "access_vector",
    "access_complexity", "authentication", "severity",
};

std::string squash(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view task_name(Task task) { return kTaskNames[static_cast<std::size_t>(task)]; }

std::optional<Task> parse_task(std::string_view name) {
  const auto key = squash(name);
  for (Task t : kAllTasks) {
    if (squash(task_name(t)) == key) return t;
  }
  return std::nullopt;
}

const std::vector<std::string>& task_labels(Task task) {
  static const std::vector<std::string> impact = {"None", "Partial", "Complete"};
  static const std::vector<std::string> vector = {"Local", "Adjacent Network", "Network"};
  static const std::vector<std::string> level = {"Low", "Medium", "High"};
  static const std::vector<std::string> auth = {"None", "Single", "Multiple"};
  switch (task) {
    case Task::confidentiality:
    case Task::integrity:
    case Task::availability:
      return impact;
    case Task::access_vector:
      return vector;
    case Task::access_complexity:
    case Task::severity:
      return level;
    case Task::authentication:
      return auth;
  }
  return impact;
}

std::size_t label_count(Task task) { return task_labels(task).size(); }

std::uint8_t parse_label(Task task, std::string_view text) {
  const auto key = squash(text);
  const auto& labels = task_labels(task);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (squash(labels[i]) == key) return static_cast<std::uint8_t>(i);
  }
  if (task == Task::access_vector && key == "adjacent") return 1;
  throw InvalidLabel("invalid " + std::string(task_name(task)) + " label '" + std::string(text) +
                     "'");
}

const std::string& label_name(Task task, std::uint8_t index) {
  const auto& labels = task_labels(task);
  if (index >= labels.size()) {
    throw InvalidLabel("label index " + std::to_string(index) + " out of range for " +
                       std::string(task_name(task)));
  }
  return labels[index];
}

void validate(const CvssAssessment& labels) {
  for (Task t : kAllTasks) label_name(t, labels[t]);
}

}  // namespace deepcva
