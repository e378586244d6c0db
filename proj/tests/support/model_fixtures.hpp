#pragma once

// Small configs and synthetic commits shared by the model, training and
// acceptance tests.

#include <algorithm>
#include <vector>

#include "deepcva/model/model.hpp"
#include "deepcva/tensor/random.hpp"
#include "gradcheck.hpp"

namespace deepcva::testing {

inline model::ModelConfig reduced_config() {
  model::ModelConfig c;
  c.n = 16;
  c.l = 8;
  c.vocab_size = 40;
  c.f = 4;
  c.gru_hidden = 8;
  c.attn_hidden = 8;
  c.task_hidden = 8;
  return c;
}

/// Random labels; each input has a random number of real tokens (at least one
/// unless `allow_empty`) followed by PAD.
inline tokenizer::EncodedCommit random_commit(tensor::Rng& rng, const model::ModelConfig& config,
                                              bool allow_empty = false) {
  tokenizer::EncodedCommit c;
  for (std::size_t s = 0; s < tokenizer::kInputCount; ++s) {
    const std::size_t lo = allow_empty ? 0 : 1;
    const std::size_t real = lo + tensor::uniform_index(rng, config.n + 1 - lo);
    c.ids[s].assign(config.n, tokenizer::kPadId);
    c.masks[s].assign(config.n, 0);
    for (std::size_t t = 0; t < real; ++t) {
      c.ids[s][t] = static_cast<std::int32_t>(1 + tensor::uniform_index(rng, config.vocab_size - 1));
      c.masks[s][t] = 1;
    }
  }
  for (auto task : kAllTasks) {
    c.labels.values[static_cast<std::size_t>(task)] =
        static_cast<std::uint8_t>(tensor::uniform_index(rng, label_count(task)));
  }
  return c;
}

inline std::vector<const tokenizer::EncodedCommit*> pointers(
    const std::vector<tokenizer::EncodedCommit>& commits) {
  std::vector<const tokenizer::EncodedCommit*> out;
  for (const auto& c : commits) out.push_back(&c);
  return out;
}

/// Finite-difference check of the whole training loss (train mode, dropout
/// with a fixed mask) w.r.t. every parameter tensor. Probes every coordinate
/// when `all_coordinates`, otherwise up to `sample` random coordinates per
/// tensor. The loss sums seven tasks (about 8 at init), so central
/// differences carry ~1e-10 of rounding noise; the absolute floor is 1e-5 to
/// keep that noise under the 1e-4 bound on near-zero gradients. Batch-norm
/// moving statistics change between calls but do not enter the train-mode
/// output.
inline constexpr double kModelGradFloor = 1e-5;

inline GradCheckResult model_grad_check(const model::ModelConfig& config, std::uint64_t seed,
                                        bool all_coordinates, std::size_t sample = 12) {
  tensor::Rng rng(tensor::derive_seed(seed, "gradcheck.data"));
  std::vector<tokenizer::EncodedCommit> commits;
  for (int i = 0; i < 3; ++i) commits.push_back(random_commit(rng, config));
  const auto batch = pointers(commits);
  auto params = model::init_params(config, seed);
  // Nonzero biases and batch-norm shifts keep every path exercised.
  for (auto& t : params.trainable()) {
    if (t.rank() == 1) {
      for (auto& v : t.mutable_values()) v = tensor::uniform(rng, -0.3, 0.3);
    }
  }
  const auto loss_fn = [&] {
    tensor::Rng dropout_rng(tensor::derive_seed(seed, "gradcheck.dropout"));
    return model::batch_loss(params, config, batch, dropout_rng);
  };
  const auto trainable = params.trainable();
  const auto coords = [&](std::size_t i) {
    std::vector<std::size_t> idx;
    if (all_coordinates) return idx;
    const std::size_t n = trainable[i].numel();
    if (n <= sample) return idx;
    for (std::size_t k = 0; k < sample; ++k) idx.push_back(tensor::uniform_index(rng, n));
    return idx;
  };
  return grad_check(loss_fn, trainable, 1e-5, coords, kModelGradFloor);
}

}  // namespace deepcva::testing
