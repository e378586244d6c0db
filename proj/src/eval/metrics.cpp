#include "deepcva/eval/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace deepcva::eval {

namespace {

std::size_t check_square(const Confusion& c) {
  const std::size_t k = c.size();
  if (k == 0) throw std::invalid_argument("confusion matrix is empty");
  for (const auto& row : c) {
    if (row.size() != k) throw std::invalid_argument("confusion matrix is not square");
  }
  return k;
}

}  // namespace

Confusion confusion_matrix(std::span<const int> truth, std::span<const int> predicted, std::size_t classes) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("confusion_matrix: " + std::to_string(truth.size()) + " labels vs " +
                                std::to_string(predicted.size()) + " predictions");
  }
  Confusion c(classes, std::vector<std::uint64_t>(classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0 || static_cast<std::size_t>(truth[i]) >= classes ||
        static_cast<std::size_t>(predicted[i]) >= classes) {
      throw std::out_of_range("confusion_matrix: label outside [0, " + std::to_string(classes) + ")");
    }
    ++c[truth[i]][predicted[i]];
  }
  return c;
}

double mcc_multiclass(const Confusion& confusion) {
  const std::size_t k = check_square(confusion);
  // Counts stay exact in long double up to 2^64; products are formed there.
  long double n = 0, trace = 0, tp_sum = 0, p_sq = 0, t_sq = 0;
  std::vector<long double> t(k, 0), p(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto v = static_cast<long double>(confusion[i][j]);
      t[i] += v;
      p[j] += v;
      n += v;
    }
    trace += static_cast<long double>(confusion[i][i]);
  }
  if (n == 0) throw std::invalid_argument("mcc_multiclass: empty confusion matrix");
  for (std::size_t i = 0; i < k; ++i) {
    tp_sum += t[i] * p[i];
    p_sq += p[i] * p[i];
    t_sq += t[i] * t[i];
  }
  const long double denom = (n * n - p_sq) * (n * n - t_sq);
  if (denom <= 0) return 0.0;
  return static_cast<double>((n * trace - tp_sum) / std::sqrt(denom));
}

double macro_f1(const Confusion& confusion) {
  const std::size_t k = check_square(confusion);
  double total = 0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::uint64_t tp = confusion[c][c], actual = 0, predicted = 0;
    for (std::size_t j = 0; j < k; ++j) {
      actual += confusion[c][j];
      predicted += confusion[j][c];
    }
    if (actual == 0 && predicted == 0) continue;
    ++counted;
    // F1 = 2TP / (actual + predicted); zero when TP is zero.
    total += 2.0 * static_cast<double>(tp) / static_cast<double>(actual + predicted);
  }
  if (counted == 0) throw std::invalid_argument("macro_f1: empty confusion matrix");
  return total / static_cast<double>(counted);
}

}  // namespace deepcva::eval
