#include "deepcva/model/layers.hpp"

#include <string>

namespace deepcva::model {

using namespace tensor;

namespace {

// [B, T, in] x [in, H] + b -> [B, T, H]
Tensor project_sequence(const Tensor& x, const Tensor& w, const Tensor& b) {
  const auto batch = x.dim(0), steps = x.dim(1), width = x.dim(2);
  auto flat = reshape(x, {batch * steps, width});
  return reshape(add(matmul(flat, w), b), {batch, steps, w.dim(1)});
}

// Recurrence given the already projected inputs xz, xr, xh (each [B, H]).
Tensor gru_update(const Tensor& xz, const Tensor& xr, const Tensor& xh, const Tensor& h,
                  const GruParams& p) {
  auto z = sigmoid(add(xz, matmul(h, p.u_z)));
  auto r = sigmoid(add(xr, matmul(h, p.u_r)));
  auto c = tanh(add(xh, matmul(mul(r, h), p.u_h)));
  return add(mul(one_minus(z), h), mul(z, c));
}

}  // namespace

Tensor gru_step(const Tensor& x_t, const Tensor& h_prev, const GruParams& p) {
  if (x_t.rank() != 2 || h_prev.rank() != 2 || x_t.dim(0) != h_prev.dim(0) ||
      h_prev.dim(1) != p.u_z.dim(0)) {
    throw ShapeMismatch("gru_step: x_t " + shape_str(x_t.shape()) + ", h_prev " +
                        shape_str(h_prev.shape()));
  }
  return gru_update(add(matmul(x_t, p.w_z), p.b_z), add(matmul(x_t, p.w_r), p.b_r),
                    add(matmul(x_t, p.w_h), p.b_h), h_prev, p);
}

Tensor gru_sequence(const Tensor& x, const GruParams& p) {
  if (x.rank() != 3 || x.dim(2) != p.w_z.dim(0)) {
    throw ShapeMismatch("gru_sequence: x " + shape_str(x.shape()) + ", W_z " +
                        shape_str(p.w_z.shape()));
  }
  const auto batch = x.dim(0), steps = x.dim(1), hidden = p.u_z.dim(0);
  const auto xz = project_sequence(x, p.w_z, p.b_z);
  const auto xr = project_sequence(x, p.w_r, p.b_r);
  const auto xh = project_sequence(x, p.w_h, p.b_h);
  Tensor h = Tensor::zeros({batch, hidden});
  std::vector<Tensor> states;
  states.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    h = gru_update(time_step(xz, t), time_step(xr, t), time_step(xh, t), h, p);
    states.push_back(h);
  }
  return stack_steps(states);
}

Tensor attention_pool(const Tensor& h, std::span<const std::uint8_t> mask,
                      const AttentionParams& p, MaskFallback fallback) {
  if (h.rank() != 3 || mask.size() != h.dim(0) * h.dim(1)) {
    throw ShapeMismatch("attention_pool: h " + shape_str(h.shape()) + ", mask of " +
                        std::to_string(mask.size()));
  }
  const auto batch = h.dim(0), steps = h.dim(1), hidden = h.dim(2);
  if (fallback == MaskFallback::error) {
    for (std::size_t b = 0; b < batch; ++b) {
      bool any = false;
      for (std::size_t t = 0; t < steps; ++t) any = any || mask[b * steps + t];
      if (!any) throw AllMasked("attention_pool: row " + std::to_string(b) + " is fully masked");
    }
  }
  auto flat = reshape(h, {batch * steps, hidden});
  auto scores = matmul(tanh(add(matmul(flat, p.w_a), p.b_a)), p.w_s);
  auto weights = masked_softmax(reshape(scores, {batch, steps}), mask);
  return weighted_sum(weights, h);
}

}  // namespace deepcva::model
