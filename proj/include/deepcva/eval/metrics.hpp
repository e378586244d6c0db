#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace deepcva::eval {

/// counts[true_class][predicted_class]
using Confusion = std::vector<std::vector<std::uint64_t>>;

/// Throws std::out_of_range for a label outside [0, classes) and
/// std::invalid_argument for sequences of different length.
Confusion confusion_matrix(std::span<const int> truth, std::span<const int> predicted, std::size_t classes);

/// Gorodkin's R_K: (N·trace − Σ t_k p_k) / sqrt((N² − Σ p_k²)(N² − Σ t_k²)),
/// t = true-class totals, p = predicted-class totals; 0 when the denominator
/// is 0. Throws std::invalid_argument for an empty or non-square matrix.
double mcc_multiclass(const Confusion& confusion);

/// Mean per-class F1 over classes that occur in the truth or the
/// predictions; a class with zero precision and recall scores 0.
double macro_f1(const Confusion& confusion);

}  // namespace deepcva::eval
