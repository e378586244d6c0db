#include "deepcva/eval/split.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace deepcva::eval {

std::vector<std::size_t> SplitPlan::train_indices(const Round& round) const {
  std::vector<std::size_t> out;
  for (auto f : round.train_folds) out.insert(out.end(), folds[f].begin(), folds[f].end());
  return out;
}

SplitPlan time_split(std::span<const std::int64_t> timestamps, std::size_t n_folds) {
  if (n_folds < 3) throw std::invalid_argument("time_split: need at least 3 folds");
  if (timestamps.size() < n_folds) {
    throw TooFewCommits("time_split: " + std::to_string(timestamps.size()) + " commits for " +
                        std::to_string(n_folds) + " folds");
  }
  std::vector<std::size_t> order(timestamps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return timestamps[a] < timestamps[b]; });
  SplitPlan plan;
  const std::size_t base = order.size() / n_folds, extra = order.size() % n_folds;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < n_folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    plan.folds.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                            order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  for (std::size_t i = 1; i + 2 <= n_folds; ++i) {
    Round r;
    r.number = i;
    for (std::size_t f = 0; f < i; ++f) r.train_folds.push_back(f);
    r.val_fold = i;
    r.test_fold = i + 1;
    plan.rounds.push_back(std::move(r));
  }
  return plan;
}

}  // namespace deepcva::eval
