#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deepcva/baselines/features.hpp"

namespace deepcva::baselines {

enum class OversampleMethod { none, ros, smote };

/// Training view of one task: features with that task's labels.
struct LabeledSet {
  std::vector<SparseVector> xs;
  std::vector<int> ys;
};

struct SyntheticPoint {
  std::size_t row;     // position in the oversampled set
  std::size_t base;    // source point (index into the input set)
  std::size_t neighbor;
  double u;
};

struct OversampleResult {
  LabeledSet data;  // originals first, in input order, then new points
  std::vector<SyntheticPoint> synthetic;  // SMOTE interpolations only
};

inline constexpr std::size_t kSmoteNeighborChoices[] = {1, 5, 10, 15, 20};

/// Grows every class with fewer members than the largest one up to the
/// largest count. ROS duplicates members drawn uniformly with replacement;
/// SMOTE adds x + u (nn − x) for a random member x, one of its `smote_k`
/// nearest same-class neighbours (Euclidean, ties to the lower index) and
/// u ~ U(0, 1). A class with at most `smote_k` members falls back to ROS.
/// New points are appended class by class in label order. Deterministic in
/// `seed`.
OversampleResult oversample(const LabeledSet& train, OversampleMethod method, std::size_t smote_k,
                            std::uint64_t seed);

}  // namespace deepcva::baselines
