#include "deepcva/eval/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "deepcva/model/cvss2.hpp"
#include "deepcva/tensor/random.hpp"
#include "deepcva/tokenizer/encode.hpp"

namespace deepcva::eval {

namespace {

std::vector<const tokenizer::EncodedCommit*> pointers(const std::vector<tokenizer::EncodedCommit>& encoded,
                                                      std::span<const std::size_t> indices) {
  std::vector<const tokenizer::EncodedCommit*> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(&encoded[i]);
  return out;
}

}  // namespace

std::vector<model::ModelConfig> model_configs(const model::ModelConfig& base, const Ablations& ablations) {
  std::vector<model::TaskSpec> tasks;
  for (const auto& t : base.tasks) {
    if (ablations.severity_from_formula && model::task_of(t) == Task::severity) continue;
    tasks.push_back(t);
  }
  std::vector<model::ModelConfig> out;
  if (ablations.single_task) {
    for (const auto& t : tasks) {
      auto c = base;
      c.tasks = {t};
      out.push_back(std::move(c));
    }
  } else {
    auto c = base;
    c.tasks = std::move(tasks);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CvssAssessment> CvssModel::predict(model::Batch commits) {
  std::vector<CvssAssessment> out(commits.size());
  for (auto& [config, params] : parts) {
    const auto preds = predict_all(params, config, commits);
    for (std::size_t h = 0; h < config.tasks.size(); ++h) {
      const auto task = model::task_of(config.tasks[h]);
      if (!task) throw model::ConfigError("head '" + config.tasks[h].name + "' is not a CVSS task");
      for (std::size_t i = 0; i < preds.size(); ++i) {
        out[i][*task] = static_cast<std::uint8_t>(preds[i].tasks[h].label);
      }
    }
  }
  if (severity_from_formula) {
    for (auto& a : out) a[Task::severity] = model::cvss2_severity_from_metrics(a);
  }
  return out;
}

CvssModel train_cvss_model(const std::vector<model::ModelConfig>& configs, bool severity_from_formula,
                           model::Batch train, model::Batch validation, const TrainOptions& options,
                           std::uint64_t seed, std::vector<std::size_t>* best_epochs) {
  CvssModel m;
  m.severity_from_formula = severity_from_formula;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    auto result = train_model(configs[k], train, validation, options, tensor::derive_seed(seed, "part", k));
    if (best_epochs) best_epochs->push_back(result.best_epoch);
    m.parts.emplace_back(configs[k], std::move(result.params));
  }
  return m;
}

tokenizer::Vocabulary build_vocab_from(std::span<const io::CommitText> dataset,
                                       std::span<const std::size_t> indices, std::size_t max_tokens) {
  std::vector<std::string> docs;
  docs.reserve(indices.size() * tokenizer::kInputCount);
  for (auto i : indices) {
    for (const auto& text : dataset[i].inputs) docs.push_back(text);
  }
  return tokenizer::build_vocab(docs, max_tokens);
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t round, std::size_t repeat) {
  return tensor::derive_seed(tensor::derive_seed(seed, "round", round), "repeat", repeat);
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

ExperimentResult run_experiment(std::span<const io::CommitText> dataset, const ExperimentOptions& options) {
  std::vector<std::int64_t> timestamps;
  for (const auto& c : dataset) timestamps.push_back(c.timestamp);
  const auto plan = time_split(timestamps, options.n_folds);
  if (options.rounds == 0 || options.rounds > plan.rounds.size()) {
    throw std::invalid_argument("rounds must be in [1, " + std::to_string(plan.rounds.size()) + "]");
  }
  if (options.repeats == 0) throw std::invalid_argument("repeats must be positive");

  const auto started = std::chrono::steady_clock::now();
  std::vector<RunResult> runs(options.rounds * options.repeats);
  std::vector<double> seconds(runs.size());
  for (std::size_t r = 0; r < options.rounds; ++r) {
    const auto& round = plan.rounds[r];
    const auto train_idx = plan.train_indices(round);
    const auto vocab = build_vocab_from(dataset, train_idx, options.max_vocab);
    auto base = options.config;
    base.vocab_size = vocab.size();
    const auto configs = model_configs(base, options.ablations);

    // Only the commits this round touches are encoded.
    std::vector<tokenizer::EncodedCommit> encoded(dataset.size());
    auto encode_all = [&](std::span<const std::size_t> idx) {
      for (auto i : idx) {
        encoded[i] = tokenizer::encode(dataset[i].inputs, vocab, base.n);
        encoded[i].labels = dataset[i].labels;
      }
    };
    encode_all(train_idx);
    encode_all(plan.val_indices(round));
    encode_all(plan.test_indices(round));
    const auto train = pointers(encoded, train_idx);
    const auto val = pointers(encoded, plan.val_indices(round));
    const auto test = pointers(encoded, plan.test_indices(round));
    std::vector<CvssAssessment> truth;
    for (const auto* c : test) truth.push_back(c->labels);

    spdlog::info("round {}: {} train, {} validation, {} test commits, vocabulary {}", round.number,
                 train.size(), val.size(), test.size(), vocab.size());
    parallel_for(options.repeats, options.threads, [&](std::size_t j) {
      const auto t0 = std::chrono::steady_clock::now();
      RunResult run;
      run.round = round.number;
      run.repeat = j;
      run.seed = run_seed(options.seed, round.number, j);
      auto m = train_cvss_model(configs, options.ablations.severity_from_formula, train, val, options.train,
                                run.seed, &run.best_epochs);
      run.tasks = score_tasks(truth, m.predict(test));
      finish_run(run);
      const auto k = r * options.repeats + j;
      runs[k] = std::move(run);
      seconds[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
  }

  ExperimentResult result;
  std::string method = options.ablations.single_task ? "deepcva-single-task" : "deepcva";
  if (options.ablations.severity_from_formula) method += "+severity-formula";
  if (!options.config.attention) method += "+no-attention";
  if (options.config.inputs == 2) method += "+hunks-only";
  result.report = aggregate(std::move(method), std::move(runs));
  result.timings.run_seconds = std::move(seconds);
  result.timings.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace deepcva::eval
