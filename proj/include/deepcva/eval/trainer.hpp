#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "deepcva/model/model.hpp"

namespace deepcva::eval {

class DivergedLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainOptions {
  std::size_t max_epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 0.001;
  std::size_t patience = 5;
  double min_delta = 1e-4;
  bool early_stopping = true;
};

struct EpochLog {
  std::size_t epoch = 0;      // 1-based
  double train_loss = 0.0;    // mean over batches
  double val_mcc = 0.0;       // mean over the model's heads
  std::vector<double> val_task_mcc;
};

struct TrainResult {
  model::ModelParams params;  // weights of the best validation epoch
  std::size_t best_epoch = 0;
  double best_val_mcc = 0.0;
  std::vector<EpochLog> history;
  bool stopped_early = false;
};

/// Called after every epoch; returning true ends training.
using EpochCallback = std::function<bool(const EpochLog&, const model::ModelParams&)>;

/// Inference in chunks of `chunk` commits.
std::vector<model::Prediction> predict_all(model::ModelParams& params, const model::ModelConfig& config,
                                           model::Batch commits, std::size_t chunk = 64);

/// MCC of each head against the commits' labels.
std::vector<double> head_mcc(const model::ModelConfig& config, std::span<const model::Prediction> predictions,
                             model::Batch commits);

/// Adam with per-epoch reshuffling; after each epoch the validation mean MCC
/// decides the best checkpoint and early stopping. Throws DivergedLoss on a
/// non-finite loss or gradient. Deterministic in `seed`.
TrainResult train_model(const model::ModelConfig& config, model::Batch train, model::Batch validation,
                        const TrainOptions& options, std::uint64_t seed, const EpochCallback& on_epoch = {});

}  // namespace deepcva::eval
