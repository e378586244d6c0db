#include "deepcva/baselines/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "deepcva/tensor/random.hpp"

namespace deepcva::baselines {

namespace {

double norm2(std::span<const double> c) {
  double s = 0;
  for (double v : c) s += v * v;
  return s;
}

struct Lloyd {
  std::span<const SparseVector> xs;
  std::vector<double> x_norm;

  // Nearest centroid and its squared distance for every point.
  double assign(const std::vector<std::vector<double>>& centroids, std::vector<std::size_t>& assignment,
                std::vector<double>& dist) const {
    std::vector<double> c_norm;
    for (const auto& c : centroids) c_norm.push_back(norm2(c));
    double inertia = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(xs[i], x_norm[i], centroids[c], c_norm[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assignment[i] = best;
      dist[i] = best_d;
      inertia += best_d;
    }
    return inertia;
  }
};

std::vector<std::vector<double>> plus_plus_seeds(std::span<const SparseVector> xs, std::size_t k,
                                                 tensor::Rng& rng) {
  std::vector<std::vector<double>> centroids;
  centroids.push_back(xs[tensor::uniform_index(rng, xs.size())].dense());
  std::vector<double> d(xs.size(), std::numeric_limits<double>::infinity());
  while (centroids.size() < k) {
    const auto& last = centroids.back();
    const double last_norm = norm2(last);
    double total = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      d[i] = std::min(d[i], squared_distance(xs[i], xs[i].squared_norm(), last, last_norm));
      total += d[i];
    }
    std::size_t pick = 0;
    if (total <= 0) {
      // Every point coincides with a centroid already; any choice is as good.
      pick = tensor::uniform_index(rng, xs.size());
    } else {
      double r = tensor::uniform01(rng) * total;
      pick = xs.size() - 1;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (d[i] > 0 && r < d[i]) {
          pick = i;
          break;
        }
        r -= d[i];
      }
    }
    centroids.push_back(xs[pick].dense());
  }
  return centroids;
}

}  // namespace

std::size_t nearest_centroid(const SparseVector& x, std::span<const std::vector<double>> centroids) {
  if (centroids.empty()) throw std::invalid_argument("no centroids");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  const double xn = x.squared_norm();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(x, xn, centroids[c], norm2(centroids[c]));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

KMeansResult kmeans(std::span<const SparseVector> xs, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k == 0 || k > xs.size()) throw std::invalid_argument("k must be in [1, number of points]");
  Lloyd lloyd{xs, {}};
  for (const auto& x : xs) lloyd.x_norm.push_back(x.squared_norm());
  const std::size_t dim = xs.front().dim;

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t restart = 0; restart < std::max<std::size_t>(1, options.restarts); ++restart) {
    tensor::Rng rng(tensor::derive_seed(seed, "kmeans.restart", restart));
    KMeansResult run;
    run.centroids = plus_plus_seeds(xs, k, rng);
    run.assignment.assign(xs.size(), 0);
    std::vector<double> dist(xs.size());
    std::vector<std::size_t> previous;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
      run.inertia = lloyd.assign(run.centroids, run.assignment, dist);
      if (run.assignment == previous) break;
      previous = run.assignment;
      std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
      std::vector<std::size_t> counts(k, 0);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto c = run.assignment[i];
        ++counts[c];
        for (std::size_t e = 0; e < xs[i].index.size(); ++e) sums[c][xs[i].index[e]] += xs[i].value[e];
      }
      for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
          // Farthest point from its own centroid; lower index on ties.
          const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
          spdlog::debug("k-means: cluster {} emptied; re-seeding at point {}", c, far);
          run.centroids[c] = xs[far].dense();
          dist[far] = 0;
          continue;
        }
        for (auto& v : sums[c]) v /= static_cast<double>(counts[c]);
        run.centroids[c] = std::move(sums[c]);
      }
    }
    run.inertia = lloyd.assign(run.centroids, run.assignment, dist);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

CvssAssessment majority_labels(std::span<const CvssAssessment> labels) {
  CvssAssessment out;
  for (auto t : kAllTasks) {
    std::vector<std::size_t> counts(label_count(t), 0);
    for (const auto& l : labels) ++counts[l[t]];
    out[t] = static_cast<std::uint8_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }
  return out;
}

CvssAssessment ClusterModel::predict(const SparseVector& x) const {
  return majority[nearest_centroid(x, centroids)];
}

ClusterModel train_ucva(std::span<const SparseVector> xs, std::span<const CvssAssessment> labels,
                        std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  if (xs.size() != labels.size()) throw std::invalid_argument("features and labels differ in length");
  auto km = kmeans(xs, k, seed, options);
  ClusterModel model;
  const auto global = majority_labels(labels);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<CvssAssessment> members;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (km.assignment[i] == c) members.push_back(labels[i]);
    }
    // A cluster left empty after the final assignment predicts the global majority.
    model.majority.push_back(members.empty() ? global : majority_labels(members));
  }
  model.centroids = std::move(km.centroids);
  return model;
}

std::vector<std::size_t> ucva_k_grid() {
  std::vector<std::size_t> ks;
  for (std::size_t k = 2; k <= 10; ++k) ks.push_back(k);
  for (std::size_t k = 15; k <= 50; k += 5) ks.push_back(k);
  return ks;
}

}  // namespace deepcva::baselines
