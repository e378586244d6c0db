#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace deepcva::eval {

class TooFewCommits : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultFolds = 12;

/// Round i (1-based) trains on folds 1..i, validates on fold i+1 and tests on
/// fold i+2. Fold numbers here are 0-based indices into SplitPlan::folds.
struct Round {
  std::size_t number = 0;
  std::vector<std::size_t> train_folds;
  std::size_t val_fold = 0;
  std::size_t test_fold = 0;
};

struct SplitPlan {
  /// Dataset indices per fold; folds are contiguous in date order and their
  /// sizes differ by at most one.
  std::vector<std::vector<std::size_t>> folds;
  std::vector<Round> rounds;  // n_folds - 2 of them

  std::vector<std::size_t> train_indices(const Round& round) const;
  const std::vector<std::size_t>& val_indices(const Round& round) const { return folds[round.val_fold]; }
  const std::vector<std::size_t>& test_indices(const Round& round) const { return folds[round.test_fold]; }
};

/// Orders commits by timestamp (ties by dataset index) and cuts them into
/// `n_folds` contiguous folds; the first N mod n_folds folds get one extra
/// commit. Needs at least n_folds commits and n_folds >= 3.
SplitPlan time_split(std::span<const std::int64_t> timestamps, std::size_t n_folds = kDefaultFolds);

}  // namespace deepcva::eval
