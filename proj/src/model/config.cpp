#include "deepcva/model/config.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace deepcva::model {

namespace {

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value +
                      "'");
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

std::vector<TaskSpec> cvss_tasks() {
  std::vector<TaskSpec> tasks;
  for (Task t : kAllTasks) tasks.push_back({std::string(task_name(t)), label_count(t)});
  return tasks;
}

std::optional<Task> task_of(const TaskSpec& spec) { return parse_task(spec.name); }

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(n, "n");
  positive(l, "l");
  positive(f, "f");
  positive(gru_hidden, "gru_hidden");
  positive(attn_hidden, "attn_hidden");
  positive(task_hidden, "task_hidden");
  if (vocab_size < 3) throw ConfigError("vocab_size must leave room for PAD, UNK and a token");
  if (filter_sizes.empty()) throw ConfigError("filter_sizes must not be empty");
  for (auto k : filter_sizes) {
    if (k == 0 || k > n) {
      throw ConfigError("filter size " + std::to_string(k) + " must be in [1, n=" +
                        std::to_string(n) + "]");
    }
  }
  if (tasks.empty()) throw ConfigError("at least one task is required");
  for (const auto& t : tasks) {
    if (t.n_labels < 2) throw ConfigError("task " + t.name + " needs at least 2 labels");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout_rate must be in [0, 1)");
  }
  if (inputs != 2 && inputs != 4) throw ConfigError("inputs must be 2 or 4");
}

std::string ModelConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "n=" << n << "\nl=" << l << "\nvocab_size=" << vocab_size << "\nfilter_sizes=";
  for (std::size_t i = 0; i < filter_sizes.size(); ++i) out << (i ? "," : "") << filter_sizes[i];
  out << "\nf=" << f << "\ngru_hidden=" << gru_hidden << "\nattn_hidden=" << attn_hidden
      << "\ntask_hidden=" << task_hidden << "\ntasks=";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    out << (i ? "," : "") << tasks[i].name << ':' << tasks[i].n_labels;
  }
  out << "\ndropout_rate=" << dropout_rate << "\nattention=" << (attention ? 1 : 0)
      << "\ninputs=" << inputs << "\n";
  return out.str();
}

ModelConfig ModelConfig::from_canonical(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (const auto& line : split(text, '\n')) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed config line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(std::string("config is missing '") + key + "'");
    return it->second;
  };
  ModelConfig c;
  c.n = parse_size("n", get("n"));
  c.l = parse_size("l", get("l"));
  c.vocab_size = parse_size("vocab_size", get("vocab_size"));
  c.filter_sizes.clear();
  for (const auto& k : split(get("filter_sizes"), ',')) {
    c.filter_sizes.push_back(parse_size("filter_sizes", k));
  }
  c.f = parse_size("f", get("f"));
  c.gru_hidden = parse_size("gru_hidden", get("gru_hidden"));
  c.attn_hidden = parse_size("attn_hidden", get("attn_hidden"));
  c.task_hidden = parse_size("task_hidden", get("task_hidden"));
  c.tasks.clear();
  for (const auto& t : split(get("tasks"), ',')) {
    const auto colon = t.rfind(':');
    if (colon == std::string::npos) throw ConfigError("malformed task '" + t + "'");
    c.tasks.push_back({t.substr(0, colon), parse_size("tasks", t.substr(colon + 1))});
  }
  const auto& rate = get("dropout_rate");
  try {
    c.dropout_rate = std::stod(rate);
  } catch (const std::logic_error&) {
    throw ConfigError("config key 'dropout_rate': expected a number");
  }
  c.attention = parse_size("attention", get("attention")) != 0;
  c.inputs = parse_size("inputs", get("inputs"));
  c.validate();
  return c;
}

}  // namespace deepcva::model
