#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "deepcva/tensor/random.hpp"
#include "deepcva/tensor/tensor.hpp"

namespace deepcva::tensor {

// Differentiable primitives. Unless stated otherwise, 2-D tensors are
// [rows, cols] and 3-D sequence tensors are [batch, time, features].

/// [m, k] x [k, n] -> [m, n]
Tensor matmul(const Tensor& a, const Tensor& b);

/// Elementwise a + b. `b` may also be a bias with numel equal to a's last
/// dimension, broadcast over every leading position.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
/// 1 - a
Tensor one_minus(const Tensor& a);

Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);

/// Softmax over the last dimension.
Tensor softmax(const Tensor& a);

/// Softmax over the last dimension where positions with mask 0 get weight 0.
/// A row with no unmasked position falls back to uniform weights over the
/// whole row. mask.size() == a.numel().
Tensor masked_softmax(const Tensor& a, std::span<const std::uint8_t> mask);

/// Concatenates 2-D tensors along axis 0 (rows) or 1 (columns).
Tensor concat(std::span<const Tensor> parts, std::size_t axis);
/// 2-D slice [start, start + length) along `axis`.
Tensor slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length);
Tensor reshape(const Tensor& a, Shape shape);

/// Rows of `table` ([V, L]) selected by `ids`, returned as [ids.size(), L].
Tensor embedding_lookup(const Tensor& table, std::span<const std::int32_t> ids);

/// Stride-1 valid convolution. x: [B, N, L], filters: [K, L, F], bias: [F]
/// -> [B, N - K + 1, F].
Tensor conv1d(const Tensor& x, const Tensor& filters, const Tensor& bias);

/// x: [B, T, F] -> [B, F] at time t.
Tensor time_step(const Tensor& x, std::size_t t);
/// T tensors of [B, H] -> [B, T, H].
Tensor stack_steps(std::span<const Tensor> steps);
/// x: [B, T, H], one time index per batch row -> [B, H].
Tensor gather_steps(const Tensor& x, std::span<const std::size_t> index);
/// weights: [B, T], x: [B, T, H] -> [B, H] with out[b] = sum_t w[b,t] x[b,t].
Tensor weighted_sum(const Tensor& weights, const Tensor& x);

/// Inverted dropout; the identity when `train` is false or rate is 0.
Tensor dropout(const Tensor& a, double rate, Rng& rng, bool train);

struct BatchNormState {
  Tensor running_mean;  // [F], no grad
  Tensor running_var;   // [F], no grad
  double momentum = 0.1;
  double eps = 1e-5;
};

/// Normalises every feature (last dimension) over all leading positions.
/// Training mode uses batch statistics and updates the running estimates;
/// inference uses the running estimates.
Tensor batch_norm(const Tensor& a, const Tensor& gamma, const Tensor& beta, BatchNormState& state,
                  bool train);

/// Mean over rows of -log softmax(logits)[label]; probabilities are clamped at
/// 1e-12 before the log.
Tensor cross_entropy(const Tensor& logits, std::span<const std::int32_t> labels);
/// Mean over rows of -log(max(probs[label], 1e-12)).
Tensor nll_loss(const Tensor& probs, std::span<const std::int32_t> labels);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

inline constexpr double kProbabilityFloor = 1e-12;

}  // namespace deepcva::tensor
