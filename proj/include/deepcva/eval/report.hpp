#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepcva/eval/cvss.hpp"

namespace deepcva::eval {

/// Test-fold scores of one task.
struct TaskScore {
  double mcc = 0.0;
  double macro_f1 = 0.0;
};

struct RunResult {
  std::size_t round = 0;   // 1-based
  std::size_t repeat = 0;  // 0-based
  std::uint64_t seed = 0;
  std::array<TaskScore, kTaskCount> tasks{};
  double mean_mcc = 0.0;  // mean of the seven task MCCs
  double mean_f1 = 0.0;
  std::vector<std::size_t> best_epochs;  // one per trained model; empty for baselines
};

/// Per-task and model-level means over a set of runs.
struct ScoreSummary {
  std::array<TaskScore, kTaskCount> tasks{};
  double mean_mcc = 0.0;
  double mean_f1 = 0.0;
};

struct RoundSummary {
  std::size_t round = 0;
  ScoreSummary mean;        // over the round's repeats
  std::size_t best_repeat;  // run with the highest mean MCC; ties go to the lower repeat
  ScoreSummary best;
};

struct MetricsReport {
  std::string method;
  std::vector<RunResult> runs;  // ordered by (round, repeat)
  std::vector<RoundSummary> rounds;
  ScoreSummary average;  // mean of the per-round means
  ScoreSummary best;     // mean of the per-round best runs
  double max_mean_mcc = 0.0;
};

/// Scores of every task from predicted and true assessments.
std::array<TaskScore, kTaskCount> score_tasks(std::span<const CvssAssessment> truth,
                                              std::span<const CvssAssessment> predicted);

/// Fills mean_mcc/mean_f1 of a run from its task scores.
void finish_run(RunResult& run);

/// Groups runs by round and reduces them. Every mean is a left-to-right sum
/// in (round, repeat) order divided by the count, so the result does not
/// depend on the order in which runs were produced.
MetricsReport aggregate(std::string method, std::vector<RunResult> runs);

/// Contains no wall-clock data: equal inputs give byte-identical text.
nlohmann::ordered_json report_to_json(const MetricsReport& report);
/// Plain-text table: per task F1 and MCC for the average and best rows.
std::string report_table(const MetricsReport& report);

/// Wall-clock seconds of every run; kept apart from the report.
struct Timings {
  std::vector<double> run_seconds;  // in report run order
  double total_seconds = 0.0;
};
nlohmann::ordered_json timings_to_json(const Timings& timings, const MetricsReport& report);

}  // namespace deepcva::eval
