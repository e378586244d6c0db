#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "deepcva/tensor/tensor.hpp"

namespace deepcva::tensor {

class NonFiniteGrad : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdamOptions {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment estimates, one buffer per parameter, plus the step count.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::uint64_t step = 0;

  static AdamState zeros_like(std::span<const Tensor> params);
};

/// Bias-corrected Adam update applied in place to every parameter's values.
/// Parameters without a grad are treated as having a zero gradient. Throws
/// NonFiniteGrad, leaving params and state untouched, if any grad is NaN/inf.
void adam_step(std::span<Tensor> params, AdamState& state, const AdamOptions& options = {});

}  // namespace deepcva::tensor
