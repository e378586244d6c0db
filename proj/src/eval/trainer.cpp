#include "deepcva/eval/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "deepcva/eval/early_stopping.hpp"
#include "deepcva/eval/metrics.hpp"
#include "deepcva/tensor/adam.hpp"
#include "deepcva/tensor/random.hpp"

namespace deepcva::eval {

std::vector<model::Prediction> predict_all(model::ModelParams& params, const model::ModelConfig& config,
                                           model::Batch commits, std::size_t chunk) {
  std::vector<model::Prediction> out;
  out.reserve(commits.size());
  for (std::size_t start = 0; start < commits.size(); start += chunk) {
    const auto part = commits.subspan(start, std::min(chunk, commits.size() - start));
    auto preds = model::predict(params, config, part);
    std::move(preds.begin(), preds.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<double> head_mcc(const model::ModelConfig& config, std::span<const model::Prediction> predictions,
                             model::Batch commits) {
  const auto labels = model::batch_labels(config, commits);
  std::vector<double> out;
  for (std::size_t h = 0; h < config.tasks.size(); ++h) {
    std::vector<int> truth(labels[h].begin(), labels[h].end()), predicted;
    for (const auto& p : predictions) predicted.push_back(static_cast<int>(p.tasks[h].label));
    out.push_back(mcc_multiclass(confusion_matrix(truth, predicted, config.tasks[h].n_labels)));
  }
  return out;
}

TrainResult train_model(const model::ModelConfig& config, model::Batch train, model::Batch validation,
                        const TrainOptions& options, std::uint64_t seed, const EpochCallback& on_epoch) {
  config.validate();
  if (train.empty()) throw std::invalid_argument("train_model: empty training set");
  if (validation.empty()) throw std::invalid_argument("train_model: empty validation set");
  if (options.batch_size == 0) throw std::invalid_argument("train_model: batch size must be positive");

  auto params = model::init_params(config, seed);
  auto trainable = params.trainable();
  auto adam = tensor::AdamState::zeros_like(trainable);
  const tensor::AdamOptions adam_options{.lr = options.learning_rate};
  tensor::Rng dropout_rng(tensor::derive_seed(seed, "train.dropout"));
  EarlyStopping stopper(options.patience, options.min_delta);

  TrainResult result;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<const tokenizer::EncodedCommit*> batch;
  for (std::size_t epoch = 1; epoch <= options.max_epochs; ++epoch) {
    tensor::Rng shuffle_rng(tensor::derive_seed(seed, "train.shuffle", epoch));
    // Fisher-Yates with the platform-independent index draw.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[tensor::uniform_index(shuffle_rng, i)]);
    }
    double loss_sum = 0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + options.batch_size); ++i) {
        batch.push_back(train[order[i]]);
      }
      for (auto& p : trainable) p.zero_grad();
      auto loss = model::batch_loss(params, config, batch, dropout_rng);
      const double value = loss.item();
      if (!std::isfinite(value)) {
        throw DivergedLoss("loss became " + std::to_string(value) + " in epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batches + 1));
      }
      tensor::backward(loss);
      try {
        tensor::adam_step(trainable, adam, adam_options);
      } catch (const tensor::NonFiniteGrad& e) {
        throw DivergedLoss(std::string(e.what()) + " in epoch " + std::to_string(epoch));
      }
      loss_sum += value;
      ++batches;
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(batches);
    const auto preds = predict_all(params, config, validation);
    log.val_task_mcc = head_mcc(config, preds, validation);
    log.val_mcc = std::accumulate(log.val_task_mcc.begin(), log.val_task_mcc.end(), 0.0) /
                  static_cast<double>(log.val_task_mcc.size());
    spdlog::debug("epoch {}: loss {:.6f}, validation MCC {:.4f}", epoch, log.train_loss, log.val_mcc);

    if (stopper.update(log.val_mcc) || result.history.empty()) {
      result.params = model::clone(params);
      result.best_epoch = epoch;
      result.best_val_mcc = log.val_mcc;
    }
    result.history.push_back(log);
    if (on_epoch && on_epoch(log, params)) break;
    if (options.early_stopping && stopper.should_stop()) {
      result.stopped_early = epoch < options.max_epochs;
      break;
    }
  }
  return result;
}

}  // namespace deepcva::eval
