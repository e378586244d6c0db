#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "deepcva/tokenizer/encode.hpp"
#include "deepcva/tokenizer/vocab.hpp"

namespace deepcva::baselines {

/// Sparse vector with strictly increasing indices and no stored zeros.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  double squared_norm() const;
  /// Dense value at `i` (0 when not stored).
  double at(std::size_t i) const;
  std::vector<double> dense() const;
  static SparseVector from_dense(std::span<const double> values);

  bool operator==(const SparseVector&) const = default;
};

double dot(const SparseVector& x, std::span<const double> dense);
double squared_distance(const SparseVector& a, const SparseVector& b);
double manhattan_distance(const SparseVector& a, const SparseVector& b);
/// Squared distance to a dense point from precomputed squared norms.
double squared_distance(const SparseVector& x, double x_norm2, std::span<const double> c, double c_norm2);
/// a + u (b − a).
SparseVector interpolate(const SparseVector& a, const SparseVector& b, double u);

/// Token counts of the four inputs, one block of vocab.size() per input:
/// token id t of input d lands at d * vocab.size() + t. Unknown tokens count
/// at the UNK id.
SparseVector bow_featurize(const std::array<std::string, tokenizer::kInputCount>& inputs,
                           const tokenizer::Vocabulary& vocab);

}  // namespace deepcva::baselines
