#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "deepcva/model/config.hpp"
#include "deepcva/tensor/checkpoint.hpp"
#include "deepcva/tensor/ops.hpp"

namespace deepcva::model {

using tensor::Tensor;

// Weights act on row vectors: a layer computes x W + b with W of shape [in, out].

struct GruParams {
  Tensor w_z, w_r, w_h;  // [in, H]
  Tensor u_z, u_r, u_h;  // [H, H]
  Tensor b_z, b_r, b_h;  // [H]
};

struct AttentionParams {
  Tensor w_a;  // [H, A]
  Tensor b_a;  // [A]
  Tensor w_s;  // [A, 1]
};

/// One convolution width with its own GRU and attention, shared by every input.
struct BranchParams {
  std::size_t width = 1;
  Tensor filters;    // [K, l, f]
  Tensor conv_bias;  // [f]
  Tensor bn_gamma;   // [f]
  Tensor bn_beta;    // [f]
  tensor::BatchNormState bn;
  GruParams gru;
  AttentionParams attention;
};

struct HeadParams {
  Tensor w_t;  // [D, task_hidden]
  Tensor b_t;
  Tensor w_p;  // [task_hidden, n_labels]
  Tensor b_p;
};

struct ModelParams {
  Tensor embedding;  // [vocab_size, l]
  std::vector<BranchParams> branches;
  std::vector<HeadParams> heads;

  /// Everything the optimizer updates, in a fixed order.
  std::vector<Tensor> trainable() const;
  /// Trainable tensors plus batch-norm running statistics, with stable names.
  std::vector<std::pair<std::string, Tensor>> named() const;
};

/// Glorot-uniform matrices, uniform(-0.05, 0.05) embeddings, zero biases,
/// unit batch-norm scale. Deterministic in `seed`.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

/// Independent copy: no tensor is shared with `params`.
ModelParams clone(const ModelParams& params);

/// Overwrites every value of `dst` with `src` (same config).
void copy_values(const ModelParams& src, ModelParams& dst);

tensor::Checkpoint to_checkpoint(const ModelParams& params, const ModelConfig& config,
                                 std::uint64_t seed);
/// Rebuilds params and config; throws tensor::CheckpointError on a missing or
/// misshapen tensor.
std::pair<ModelParams, ModelConfig> from_checkpoint(const tensor::Checkpoint& checkpoint);

}  // namespace deepcva::model
