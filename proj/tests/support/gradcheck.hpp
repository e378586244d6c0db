#pragma once

// Central finite-difference oracle. Independent of the autodiff path: it only
// calls the forward function and perturbs raw parameter values.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "deepcva/tensor/tensor.hpp"

namespace deepcva::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // "<param index>[<element>]"
  std::size_t checked = 0;
};

/// Relative error with an absolute floor in the denominator so coordinates
/// whose true gradient is ~0 are judged on absolute error.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Compares autodiff grads of `loss_fn` w.r.t. `params` against central
/// differences. `coordinates(i)` lists the element indices of param i to probe
/// (all of them when empty).
inline GradCheckResult grad_check(
    const std::function<tensor::Tensor()>& loss_fn, std::vector<tensor::Tensor> params,
    double eps = 1e-5,
    const std::function<std::vector<std::size_t>(std::size_t)>& coordinates = {},
    double floor = 1e-6) {
  for (auto& p : params) p.zero_grad();
  auto loss = loss_fn();
  tensor::backward(loss);
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) {
    if (p.has_grad()) {
      analytic.emplace_back(p.grad().begin(), p.grad().end());
    } else {
      analytic.emplace_back(p.numel(), 0.0);
    }
  }
  GradCheckResult result;
  tensor::NoGradGuard no_grad;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::vector<std::size_t> idx;
    if (coordinates) idx = coordinates(i);
    if (idx.empty()) {
      idx.resize(params[i].numel());
      for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
    }
    auto values = params[i].mutable_values();
    for (auto j : idx) {
      const double saved = values[j];
      values[j] = saved + eps;
      const double up = loss_fn().item();
      values[j] = saved - eps;
      const double down = loss_fn().item();
      values[j] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double err = relative_error(analytic[i][j], numeric, floor);
      ++result.checked;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst = std::to_string(i) + "[" + std::to_string(j) + "] analytic=" +
                       std::to_string(analytic[i][j]) + " numeric=" + std::to_string(numeric);
      }
    }
  }
  return result;
}

}  // namespace deepcva::testing
