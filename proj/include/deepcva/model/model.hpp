#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "deepcva/model/layers.hpp"
#include "deepcva/model/params.hpp"
#include "deepcva/tokenizer/encode.hpp"

namespace deepcva::model {

using tokenizer::EncodedCommit;

/// Dropout and batch-norm batch statistics are active only in `train`.
enum class Mode { train, infer };

using Batch = std::span<const EncodedCommit* const>;

/// Shared encoder. Every input of every commit is embedded, run through each
/// conv width (conv, ReLU, batch norm, GRU, attention), and the per-branch
/// vectors are concatenated per input and then across inputs:
/// [B, inputs * filter_sizes * gru_hidden]. Dropout is applied to the result.
/// A convolution row counts as real when its first token is not PAD; an input
/// with no real token attends uniformly over all rows.
Tensor encode_commits(ModelParams& params, const ModelConfig& config, Batch batch, Mode mode,
                      tensor::Rng& rng);

/// Per task: ReLU(x W_t + b_t), dropout, then x W_p + b_p. Returns one [B, C]
/// logit tensor per head.
std::vector<Tensor> head_logits(const ModelParams& params, const ModelConfig& config,
                                const Tensor& commit_vectors, Mode mode, tensor::Rng& rng);

struct TaskPrediction {
  std::vector<double> probs;
  std::size_t label = 0;
};

struct Prediction {
  std::vector<TaskPrediction> tasks;  // in config.tasks order
};

/// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

/// Softmax heads on already encoded commit vectors ([B, D]), inference mode.
std::vector<Prediction> predict_vectors(const ModelParams& params, const ModelConfig& config,
                                        const Tensor& commit_vectors);

/// Full inference pass without recording gradients. Deterministic.
std::vector<Prediction> predict(ModelParams& params, const ModelConfig& config, Batch batch);

/// Sum over tasks of the batch-mean cross-entropy -log p[label], with p
/// clamped at 1e-12. `probs[i]` is [B, C_i].
Tensor multi_task_loss(std::span<const Tensor> probs,
                       std::span<const std::vector<std::int32_t>> labels);
/// Same loss evaluated from logits through a fused, stable softmax.
Tensor multi_task_loss_from_logits(std::span<const Tensor> logits,
                                   std::span<const std::vector<std::int32_t>> labels);

/// Label column per head, read from each commit's CVSS labels. Throws
/// ConfigError for a head whose name is not a CVSS task.
std::vector<std::vector<std::int32_t>> batch_labels(const ModelConfig& config, Batch batch);

/// Training-mode loss of one batch.
Tensor batch_loss(ModelParams& params, const ModelConfig& config, Batch batch, tensor::Rng& rng);

}  // namespace deepcva::model
