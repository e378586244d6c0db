#include "deepcva/eval/report.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "deepcva/eval/metrics.hpp"

namespace deepcva::eval {

namespace {

using Json = nlohmann::ordered_json;

ScoreSummary mean_of(std::span<const RunResult* const> runs) {
  ScoreSummary s;
  const auto n = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < kTaskCount; ++t) {
    double mcc = 0, f1 = 0;
    for (const auto* r : runs) {
      mcc += r->tasks[t].mcc;
      f1 += r->tasks[t].macro_f1;
    }
    s.tasks[t] = {mcc / n, f1 / n};
  }
  double mcc = 0, f1 = 0;
  for (const auto* r : runs) {
    mcc += r->mean_mcc;
    f1 += r->mean_f1;
  }
  s.mean_mcc = mcc / n;
  s.mean_f1 = f1 / n;
  return s;
}

ScoreSummary summary_of(const RunResult& run) {
  return {run.tasks, run.mean_mcc, run.mean_f1};
}

ScoreSummary mean_of_summaries(const std::vector<ScoreSummary>& xs) {
  ScoreSummary s;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t t = 0; t < kTaskCount; ++t) {
    double mcc = 0, f1 = 0;
    for (const auto& x : xs) {
      mcc += x.tasks[t].mcc;
      f1 += x.tasks[t].macro_f1;
    }
    s.tasks[t] = {mcc / n, f1 / n};
  }
  double mcc = 0, f1 = 0;
  for (const auto& x : xs) {
    mcc += x.mean_mcc;
    f1 += x.mean_f1;
  }
  s.mean_mcc = mcc / n;
  s.mean_f1 = f1 / n;
  return s;
}

Json summary_json(const ScoreSummary& s) {
  Json j = Json::object();
  for (std::size_t t = 0; t < kTaskCount; ++t) {
    j[std::string(task_name(kAllTasks[t]))] = {{"mcc", s.tasks[t].mcc}, {"macro_f1", s.tasks[t].macro_f1}};
  }
  j["mean_mcc"] = s.mean_mcc;
  j["mean_f1"] = s.mean_f1;
  return j;
}

}  // namespace

std::array<TaskScore, kTaskCount> score_tasks(std::span<const CvssAssessment> truth,
                                              std::span<const CvssAssessment> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("score_tasks: length mismatch");
  if (truth.empty()) throw std::invalid_argument("score_tasks: no commits to score");
  std::array<TaskScore, kTaskCount> out{};
  std::vector<int> t(truth.size()), p(truth.size());
  for (std::size_t k = 0; k < kTaskCount; ++k) {
    const Task task = kAllTasks[k];
    for (std::size_t i = 0; i < truth.size(); ++i) {
      t[i] = truth[i][task];
      p[i] = predicted[i][task];
    }
    const auto cm = confusion_matrix(t, p, label_count(task));
    out[k] = {mcc_multiclass(cm), macro_f1(cm)};
  }
  return out;
}

void finish_run(RunResult& run) {
  double mcc = 0, f1 = 0;
  for (const auto& s : run.tasks) {
    mcc += s.mcc;
    f1 += s.macro_f1;
  }
  run.mean_mcc = mcc / static_cast<double>(kTaskCount);
  run.mean_f1 = f1 / static_cast<double>(kTaskCount);
}

MetricsReport aggregate(std::string method, std::vector<RunResult> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  std::sort(runs.begin(), runs.end(), [](const RunResult& a, const RunResult& b) {
    return std::tie(a.round, a.repeat) < std::tie(b.round, b.repeat);
  });
  MetricsReport report;
  report.method = std::move(method);
  report.runs = std::move(runs);

  std::map<std::size_t, std::vector<const RunResult*>> by_round;
  for (const auto& r : report.runs) by_round[r.round].push_back(&r);
  std::vector<ScoreSummary> means, bests;
  report.max_mean_mcc = report.runs.front().mean_mcc;
  for (const auto& [round, rs] : by_round) {
    RoundSummary summary;
    summary.round = round;
    summary.mean = mean_of(rs);
    const RunResult* best = rs.front();
    for (const auto* r : rs) {
      if (r->mean_mcc > best->mean_mcc) best = r;
      report.max_mean_mcc = std::max(report.max_mean_mcc, r->mean_mcc);
    }
    summary.best_repeat = best->repeat;
    summary.best = summary_of(*best);
    means.push_back(summary.mean);
    bests.push_back(summary.best);
    report.rounds.push_back(std::move(summary));
  }
  report.average = mean_of_summaries(means);
  report.best = mean_of_summaries(bests);
  return report;
}

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
  Json j;
  j["method"] = report.method;
  j["average"] = summary_json(report.average);
  j["best"] = summary_json(report.best);
  j["max_mean_mcc"] = report.max_mean_mcc;
  Json rounds = Json::array();
  for (const auto& r : report.rounds) {
    rounds.push_back({{"round", r.round},
                      {"mean", summary_json(r.mean)},
                      {"best_repeat", r.best_repeat},
                      {"best", summary_json(r.best)}});
  }
  j["rounds"] = std::move(rounds);
  Json runs = Json::array();
  for (const auto& r : report.runs) {
    Json run = {{"round", r.round}, {"repeat", r.repeat}, {"seed", r.seed}};
    run["scores"] = summary_json(summary_of(r));
    if (!r.best_epochs.empty()) run["best_epochs"] = r.best_epochs;
    runs.push_back(std::move(run));
  }
  j["runs"] = std::move(runs);
  return j;
}

std::string report_table(const MetricsReport& report) {
  std::string out = fmt::format("{} ({} runs over {} rounds)\n", report.method, report.runs.size(),
                                report.rounds.size());
  out += fmt::format("{:<20}{:>10}{:>10}{:>10}{:>10}\n", "task", "avg F1", "avg MCC", "best F1", "best MCC");
  for (std::size_t t = 0; t < kTaskCount; ++t) {
    out += fmt::format("{:<20}{:>10.3f}{:>10.3f}{:>10.3f}{:>10.3f}\n", task_name(kAllTasks[t]),
                       report.average.tasks[t].macro_f1, report.average.tasks[t].mcc,
                       report.best.tasks[t].macro_f1, report.best.tasks[t].mcc);
  }
  out += fmt::format("{:<20}{:>10.3f}{:>10.3f}{:>10.3f}{:>10.3f}\n", "average", report.average.mean_f1,
                     report.average.mean_mcc, report.best.mean_f1, report.best.mean_mcc);
  out += "\nround  mean MCC  best MCC  best repeat\n";
  for (const auto& r : report.rounds) {
    out += fmt::format("{:>5}{:>10.3f}{:>10.3f}{:>13}\n", r.round, r.mean.mean_mcc, r.best.mean_mcc,
                       r.best_repeat);
  }
  return out;
}

nlohmann::ordered_json timings_to_json(const Timings& timings, const MetricsReport& report) {
  Json runs = Json::array();
  for (std::size_t i = 0; i < report.runs.size() && i < timings.run_seconds.size(); ++i) {
    runs.push_back({{"round", report.runs[i].round},
                    {"repeat", report.runs[i].repeat},
                    {"seconds", timings.run_seconds[i]}});
  }
  return {{"method", report.method}, {"total_seconds", timings.total_seconds}, {"runs", std::move(runs)}};
}

}  // namespace deepcva::eval
