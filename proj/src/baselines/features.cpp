#include "deepcva/baselines/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "deepcva/tokenizer/tokenizer.hpp"

namespace deepcva::baselines {

double SparseVector::squared_norm() const {
  double s = 0;
  for (double v : value) s += v * v;
  return s;
}

double SparseVector::at(std::size_t i) const {
  const auto it = std::lower_bound(index.begin(), index.end(), i);
  return it != index.end() && *it == i ? value[static_cast<std::size_t>(it - index.begin())] : 0.0;
}

std::vector<double> SparseVector::dense() const {
  std::vector<double> out(dim, 0.0);
  for (std::size_t k = 0; k < index.size(); ++k) out[index[k]] = value[k];
  return out;
}

SparseVector SparseVector::from_dense(std::span<const double> values) {
  SparseVector v;
  v.dim = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) {
      v.index.push_back(static_cast<std::uint32_t>(i));
      v.value.push_back(values[i]);
    }
  }
  return v;
}

double dot(const SparseVector& x, std::span<const double> dense) {
  if (dense.size() != x.dim) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0;
  for (std::size_t k = 0; k < x.index.size(); ++k) s += x.value[k] * dense[x.index[k]];
  return s;
}

namespace {

// Visits the union of the supports in index order with both values.
template <typename F>
void merge(const SparseVector& a, const SparseVector& b, F&& f) {
  if (a.dim != b.dim) throw std::invalid_argument("sparse vectors of different dimension");
  std::size_t i = 0, j = 0;
  while (i < a.index.size() || j < b.index.size()) {
    if (j == b.index.size() || (i < a.index.size() && a.index[i] < b.index[j])) {
      f(a.index[i], a.value[i], 0.0);
      ++i;
    } else if (i == a.index.size() || b.index[j] < a.index[i]) {
      f(b.index[j], 0.0, b.value[j]);
      ++j;
    } else {
      f(a.index[i], a.value[i], b.value[j]);
      ++i;
      ++j;
    }
  }
}

}  // namespace

double squared_distance(const SparseVector& a, const SparseVector& b) {
  double s = 0;
  merge(a, b, [&](std::uint32_t, double x, double y) { s += (x - y) * (x - y); });
  return s;
}

double manhattan_distance(const SparseVector& a, const SparseVector& b) {
  double s = 0;
  merge(a, b, [&](std::uint32_t, double x, double y) { s += std::abs(x - y); });
  return s;
}

double squared_distance(const SparseVector& x, double x_norm2, std::span<const double> c, double c_norm2) {
  return std::max(0.0, x_norm2 - 2.0 * dot(x, c) + c_norm2);
}

SparseVector interpolate(const SparseVector& a, const SparseVector& b, double u) {
  SparseVector out;
  out.dim = a.dim;
  merge(a, b, [&](std::uint32_t i, double x, double y) {
    const double v = x + u * (y - x);
    if (v != 0.0) {
      out.index.push_back(i);
      out.value.push_back(v);
    }
  });
  return out;
}

SparseVector bow_featurize(const std::array<std::string, tokenizer::kInputCount>& inputs,
                           const tokenizer::Vocabulary& vocab) {
  const std::size_t block = vocab.size();
  std::map<std::uint32_t, double> counts;
  for (std::size_t d = 0; d < inputs.size(); ++d) {
    for (const auto& token : tokenizer::tokenize(inputs[d])) {
      counts[static_cast<std::uint32_t>(d * block + static_cast<std::size_t>(vocab.id(token)))] += 1.0;
    }
  }
  SparseVector v;
  v.dim = tokenizer::kInputCount * block;
  for (const auto& [i, c] : counts) {
    v.index.push_back(i);
    v.value.push_back(c);
  }
  return v;
}

}  // namespace deepcva::baselines
