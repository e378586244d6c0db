#include "deepcva/baselines/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "deepcva/eval/experiment.hpp"

namespace deepcva::baselines {

std::vector<int> Classifier::predict_all(std::span<const SparseVector> xs) const {
  std::vector<int> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict(x));
  return out;
}

std::string ConstantClassifier::describe() const { return fmt::format("constant({})", label_); }

bool single_class(std::span<const int> ys) {
  return std::adjacent_find(ys.begin(), ys.end(), std::not_equal_to<>()) == ys.end();
}

namespace {

void check_training_set(std::span<const SparseVector> xs, std::span<const int> ys, std::size_t n_classes) {
  if (xs.empty()) throw std::invalid_argument("empty training set");
  if (xs.size() != ys.size()) throw std::invalid_argument("features and labels differ in length");
  for (int y : ys) {
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes) throw std::out_of_range("label out of range");
  }
}

void softmax_inplace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0;
  for (auto& v : z) s += (v = std::exp(v - m));
  for (auto& v : z) v /= s;
}

}  // namespace

std::unique_ptr<Classifier> LogisticRegression::fit(std::span<const SparseVector> xs, std::span<const int> ys,
                                                    std::size_t n_classes, const LogRegOptions& options) {
  check_training_set(xs, ys, n_classes);
  if (options.c <= 0) throw std::invalid_argument("C must be positive");
  if (single_class(ys)) {
    spdlog::warn("single-class training labels; using a constant classifier");
    return std::make_unique<ConstantClassifier>(ys.front());
  }
  const std::size_t dim = xs.front().dim;
  const std::size_t k = n_classes;
  // Hessian of the summed softmax loss is bounded by Σ (||x||² + 1) / 2.
  double lipschitz = 0;
  for (const auto& x : xs) lipschitz += 0.5 * (x.squared_norm() + 1.0);
  if (options.penalty == Penalty::l2) lipschitz += 1.0 / options.c;
  const double step = 1.0 / lipschitz;
  const double shrink = step / options.c;

  auto model = std::unique_ptr<LogisticRegression>(new LogisticRegression());
  model->options_ = options;
  model->n_classes_ = k;
  std::vector<std::vector<double>> w(k, std::vector<double>(dim, 0.0)), w_prev = w, y_w = w;
  std::vector<double> b(k, 0.0), b_prev = b, y_b = b;
  std::vector<std::vector<double>> gw(k, std::vector<double>(dim, 0.0));
  std::vector<double> gb(k, 0.0), z(k);
  double t = 1.0;
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t c = 0; c < k; ++c) z[c] = dot(xs[i], y_w[c]) + y_b[c];
      softmax_inplace(z);
      z[static_cast<std::size_t>(ys[i])] -= 1.0;
      for (std::size_t c = 0; c < k; ++c) {
        gb[c] += z[c];
        for (std::size_t e = 0; e < xs[i].index.size(); ++e) gw[c][xs[i].index[e]] += z[c] * xs[i].value[e];
      }
    }
    w_prev.swap(w);
    b_prev.swap(b);
    double change = 0;
    for (std::size_t c = 0; c < k; ++c) {
      b[c] = y_b[c] - step * gb[c];
      for (std::size_t j = 0; j < dim; ++j) {
        double v = y_w[c][j] - step * gw[c][j];
        if (options.penalty == Penalty::l1) {
          v = std::copysign(std::max(0.0, std::abs(v) - shrink), v);
        } else {
          v -= shrink * y_w[c][j];
        }
        w[c][j] = v;
        change = std::max(change, std::abs(v - w_prev[c][j]));
      }
      change = std::max(change, std::abs(b[c] - b_prev[c]));
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = (t - 1.0) / t_next;
    for (std::size_t c = 0; c < k; ++c) {
      y_b[c] = b[c] + momentum * (b[c] - b_prev[c]);
      for (std::size_t j = 0; j < dim; ++j) y_w[c][j] = w[c][j] + momentum * (w[c][j] - w_prev[c][j]);
    }
    t = t_next;
    if (change < options.tol) break;
  }
  model->weights_ = std::move(w);
  model->bias_ = std::move(b);
  return model;
}

std::vector<double> LogisticRegression::probabilities(const SparseVector& x) const {
  std::vector<double> z(n_classes_);
  for (std::size_t c = 0; c < n_classes_; ++c) z[c] = dot(x, weights_[c]) + bias_[c];
  softmax_inplace(z);
  return z;
}

int LogisticRegression::predict(const SparseVector& x) const {
  const auto p = probabilities(x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::string LogisticRegression::describe() const {
  return fmt::format("lr(penalty={}, C={})", options_.penalty == Penalty::l1 ? "l1" : "l2", options_.c);
}

std::unique_ptr<Classifier> KNearestNeighbors::fit(std::span<const SparseVector> xs, std::span<const int> ys,
                                                   std::size_t n_classes, std::size_t k, int p) {
  check_training_set(xs, ys, n_classes);
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (p != 1 && p != 2) throw std::invalid_argument("distance norm must be 1 or 2");
  if (single_class(ys)) {
    spdlog::warn("single-class training labels; using a constant classifier");
    return std::make_unique<ConstantClassifier>(ys.front());
  }
  auto model = std::unique_ptr<KNearestNeighbors>(new KNearestNeighbors());
  model->xs_.assign(xs.begin(), xs.end());
  model->ys_.assign(ys.begin(), ys.end());
  model->n_classes_ = n_classes;
  model->k_ = k;
  model->p_ = p;
  return model;
}

int KNearestNeighbors::predict(const SparseVector& x) const {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(xs_.size());
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    // Squared L2 ranks the same as L2.
    d.emplace_back(p_ == 1 ? manhattan_distance(x, xs_[i]) : squared_distance(x, xs_[i]), i);
  }
  const std::size_t k = std::min(k_, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> votes(n_classes_, 0);
  for (std::size_t i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(ys_[d[i].second])];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::string KNearestNeighbors::describe() const { return fmt::format("knn(k={}, p={})", k_, p_); }

std::vector<Candidate> logreg_grid(std::span<const SparseVector> xs, std::span<const int> ys,
                                   std::size_t n_classes) {
  std::vector<Candidate> out;
  for (auto penalty : {Penalty::l1, Penalty::l2}) {
    for (double c : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      LogRegOptions o{.penalty = penalty, .c = c};
      out.push_back({fmt::format("lr(penalty={}, C={})", penalty == Penalty::l1 ? "l1" : "l2", c),
                     [=] { return LogisticRegression::fit(xs, ys, n_classes, o); }});
    }
  }
  return out;
}

std::vector<Candidate> knn_grid(std::span<const SparseVector> xs, std::span<const int> ys,
                                std::size_t n_classes) {
  std::vector<Candidate> out;
  for (std::size_t k : {11, 31, 51}) {
    for (int p : {1, 2}) {
      out.push_back({fmt::format("knn(k={}, p={})", k, p),
                     [=] { return KNearestNeighbors::fit(xs, ys, n_classes, k, p); }});
    }
  }
  return out;
}

GridResult grid_search(const std::vector<Candidate>& candidates, std::span<const SparseVector> validation,
                       const std::function<double(const std::vector<int>&)>& score, std::size_t threads) {
  if (candidates.empty()) throw std::invalid_argument("grid_search: empty grid");
  std::vector<std::unique_ptr<Classifier>> models(candidates.size());
  GridResult result;
  result.scores.assign(candidates.size(), 0.0);
  eval::parallel_for(candidates.size(), threads, [&](std::size_t i) {
    models[i] = candidates[i].fit();
    result.scores[i] = score(models[i]->predict_all(validation));
  });
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (result.scores[i] > result.scores[result.best]) result.best = i;
  }
  result.model = std::move(models[result.best]);
  return result;
}

}  // namespace deepcva::baselines
