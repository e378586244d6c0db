#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deepcva/baselines/features.hpp"
#include "deepcva/eval/cvss.hpp"

namespace deepcva::baselines {

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

struct KMeansResult {
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> assignment;  // per training point
  double inertia = 0.0;
};

/// Index of the nearest centroid (squared Euclidean); ties go to the lower index.
std::size_t nearest_centroid(const SparseVector& x, std::span<const std::vector<double>> centroids);

/// Lloyd's algorithm from k-means++ seeds, best inertia over the restarts.
/// A cluster that empties is re-seeded at the point farthest from its own
/// centroid. Requires 1 <= k <= points. Deterministic in `seed`.
KMeansResult kmeans(std::span<const SparseVector> xs, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// U-CVA: clusters plus the most frequent label of every task per cluster.
struct ClusterModel {
  std::vector<std::vector<double>> centroids;
  std::vector<CvssAssessment> majority;  // per cluster

  CvssAssessment predict(const SparseVector& x) const;
};

/// Most frequent label per task (ties to the lower label index).
CvssAssessment majority_labels(std::span<const CvssAssessment> labels);

ClusterModel train_ucva(std::span<const SparseVector> xs, std::span<const CvssAssessment> labels,
                        std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

/// {2..10, 15, 20, ..., 50}
std::vector<std::size_t> ucva_k_grid();

}  // namespace deepcva::baselines
