#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "deepcva/baselines/features.hpp"

namespace deepcva::baselines {

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int predict(const SparseVector& x) const = 0;
  virtual std::string describe() const = 0;

  std::vector<int> predict_all(std::span<const SparseVector> xs) const;
};

/// Always predicts one class; what fitting falls back to when the training
/// labels hold a single class.
class ConstantClassifier : public Classifier {
 public:
  explicit ConstantClassifier(int label) : label_(label) {}
  int predict(const SparseVector&) const override { return label_; }
  std::string describe() const override;

 private:
  int label_;
};

enum class Penalty { l1, l2 };

struct LogRegOptions {
  Penalty penalty = Penalty::l2;
  double c = 1.0;  // inverse regularisation strength
  std::size_t max_iter = 500;
  double tol = 1e-7;
};

/// Multinomial logistic regression minimising
///   Σ_i CE(x_i, y_i) + R(W) / C,  R = ||W||_1 or ||W||²/2,
/// with an unpenalised intercept, by accelerated proximal gradient with a
/// fixed step from a Lipschitz bound. Deterministic.
class LogisticRegression : public Classifier {
 public:
  static std::unique_ptr<Classifier> fit(std::span<const SparseVector> xs, std::span<const int> ys,
                                         std::size_t n_classes, const LogRegOptions& options);

  int predict(const SparseVector& x) const override;
  std::string describe() const override;
  std::vector<double> probabilities(const SparseVector& x) const;

 private:
  LogRegOptions options_;
  std::size_t n_classes_ = 0;
  std::vector<std::vector<double>> weights_;  // per class, dense over features
  std::vector<double> bias_;
};

/// Majority vote of the k nearest training points under the L1 (p=1) or L2
/// (p=2) distance. Distance ties go to the lower training index and vote
/// ties to the lower label; k larger than the training set uses all of it.
class KNearestNeighbors : public Classifier {
 public:
  static std::unique_ptr<Classifier> fit(std::span<const SparseVector> xs, std::span<const int> ys,
                                         std::size_t n_classes, std::size_t k, int p);

  int predict(const SparseVector& x) const override;
  std::string describe() const override;

 private:
  std::vector<SparseVector> xs_;
  std::vector<int> ys_;
  std::size_t n_classes_ = 0;
  std::size_t k_ = 1;
  int p_ = 2;
};

/// One grid point: a name and a function that trains it.
struct Candidate {
  std::string name;
  std::function<std::unique_ptr<Classifier>()> fit;
};

/// {l1, l2} × C ∈ {0.01, 0.1, 1, 10, 100}.
std::vector<Candidate> logreg_grid(std::span<const SparseVector> xs, std::span<const int> ys,
                                   std::size_t n_classes);
/// k ∈ {11, 31, 51} × p ∈ {1, 2}.
std::vector<Candidate> knn_grid(std::span<const SparseVector> xs, std::span<const int> ys,
                                std::size_t n_classes);

struct GridResult {
  std::unique_ptr<Classifier> model;
  std::size_t best = 0;
  std::vector<double> scores;  // per candidate
};

/// Trains every candidate (on up to `threads` workers) and keeps the one
/// whose validation predictions score highest; ties go to the earlier
/// candidate.
GridResult grid_search(const std::vector<Candidate>& candidates, std::span<const SparseVector> validation,
                       const std::function<double(const std::vector<int>&)>& score, std::size_t threads = 1);

/// True when every label is the same.
bool single_class(std::span<const int> ys);

}  // namespace deepcva::baselines
