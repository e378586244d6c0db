#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "deepcva/model/params.hpp"

namespace deepcva::model {

class AllMasked : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One GRU update over a batch: x_t [B, in], h_prev [B, H] -> h_t [B, H].
///   z = sigmoid(x W_z + h U_z + b_z)
///   r = sigmoid(x W_r + h U_r + b_r)
///   c = tanh(x W_h + (r * h) U_h + b_h)
///   h_t = (1 - z) * h + z * c
Tensor gru_step(const Tensor& x_t, const Tensor& h_prev, const GruParams& p);

/// Unidirectional GRU from a zero state over x [B, T, in] -> [B, T, H]. The
/// input projections are computed once for the whole sequence.
Tensor gru_sequence(const Tensor& x, const GruParams& p);

enum class MaskFallback {
  error,    // a row with no real position throws AllMasked
  uniform,  // such a row attends uniformly over every position
};

/// Additive attention over h [B, T, H] with mask [B * T] (1 = real):
/// s_t = tanh(h_t W_a + b_a) W_s, w = softmax over real positions, out = sum_t w_t h_t.
Tensor attention_pool(const Tensor& h, std::span<const std::uint8_t> mask,
                      const AttentionParams& p, MaskFallback fallback = MaskFallback::error);

}  // namespace deepcva::model
