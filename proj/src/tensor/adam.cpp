#include "deepcva/tensor/adam.hpp"

#include <cmath>
#include <string>

namespace deepcva::tensor {

AdamState AdamState::zeros_like(std::span<const Tensor> params) {
  AdamState state;
  for (const auto& p : params) {
    state.m.emplace_back(p.numel(), 0.0);
    state.v.emplace_back(p.numel(), 0.0);
  }
  return state;
}

void adam_step(std::span<Tensor> params, AdamState& state, const AdamOptions& options) {
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: state holds " + std::to_string(state.m.size()) +
                                " buffers for " + std::to_string(params.size()) + " params");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (state.m[i].size() != params[i].numel()) {
      throw ShapeMismatch("adam_step: state buffer size differs from param " +
                          shape_str(params[i].shape()));
    }
    for (double g : params[i].grad()) {
      if (!std::isfinite(g)) {
        throw NonFiniteGrad("adam_step: non-finite gradient in param " + std::to_string(i));
      }
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto values = params[i].mutable_values();
    auto grad = params[i].grad();
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double g = grad.empty() ? 0.0 : grad[j];
      m[j] = options.beta1 * m[j] + (1.0 - options.beta1) * g;
      v[j] = options.beta2 * v[j] + (1.0 - options.beta2) * g * g;
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      values[j] -= options.lr * m_hat / (std::sqrt(v_hat) + options.eps);
    }
  }
}

}  // namespace deepcva::tensor
