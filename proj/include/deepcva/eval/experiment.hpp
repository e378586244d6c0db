#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "deepcva/eval/report.hpp"
#include "deepcva/eval/split.hpp"
#include "deepcva/eval/trainer.hpp"
#include "deepcva/io/json_io.hpp"
#include "deepcva/tokenizer/vocab.hpp"

namespace deepcva::eval {

struct Ablations {
  /// One model per task instead of one shared multi-task model.
  bool single_task = false;
  /// No severity head; severity is computed from the six predicted metrics.
  bool severity_from_formula = false;
};
// no_attention, hunks_only and filter-size variants are plain ModelConfig
// fields (attention, inputs, filter_sizes).

/// The model configurations an ablation setting trains: one multi-head
/// config, or one single-head config per task.
std::vector<model::ModelConfig> model_configs(const model::ModelConfig& base, const Ablations& ablations);

/// A set of trained models that together predict all seven metrics.
struct CvssModel {
  std::vector<std::pair<model::ModelConfig, model::ModelParams>> parts;
  bool severity_from_formula = false;

  std::vector<CvssAssessment> predict(model::Batch commits);
};

/// Trains every config of `configs` on the same data; part k uses seed
/// derive_seed(seed, "part", k). Best epochs are appended to `best_epochs`.
CvssModel train_cvss_model(const std::vector<model::ModelConfig>& configs, bool severity_from_formula,
                           model::Batch train, model::Batch validation, const TrainOptions& options,
                           std::uint64_t seed, std::vector<std::size_t>* best_epochs = nullptr);

/// Vocabulary from the four inputs of the given commits only.
tokenizer::Vocabulary build_vocab_from(std::span<const io::CommitText> dataset,
                                       std::span<const std::size_t> indices, std::size_t max_tokens);

struct ExperimentOptions {
  model::ModelConfig config;  // vocab_size is replaced by each round's vocabulary size
  TrainOptions train;
  Ablations ablations;
  std::size_t n_folds = kDefaultFolds;
  std::size_t rounds = kDefaultFolds - 2;  // the first `rounds` rounds of the plan
  std::size_t repeats = 10;
  std::size_t max_vocab = tokenizer::kDefaultVocabSize;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct ExperimentResult {
  MetricsReport report;
  Timings timings;
};

/// Seed of repeat `repeat` (0-based) in round `round` (1-based).
std::uint64_t run_seed(std::uint64_t seed, std::size_t round, std::size_t repeat);

/// Time-based protocol: per round, a vocabulary from the training folds,
/// `repeats` seeded trainings selected on the validation fold and scored on
/// the test fold. Repeats run on `threads` workers; the report does not
/// depend on the thread count.
ExperimentResult run_experiment(std::span<const io::CommitText> dataset, const ExperimentOptions& options);

/// Runs `job(i)` for i in [0, count) on up to `threads` workers and rethrows
/// the first exception.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job);

}  // namespace deepcva::eval
