#pragma once

#include <cstddef>
#include <limits>

namespace deepcva::eval {

/// Tracks a validation score to maximise. An epoch improves only when it
/// beats the best so far by more than `min_delta`; training stops after
/// `patience` consecutive epochs without improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience = 5, double min_delta = 1e-4)
      : patience_(patience), min_delta_(min_delta) {}

  /// Records the score of the next epoch; true when it is the new best.
  bool update(double score) {
    ++epoch_;
    if (epoch_ == 1 || score > best_ + min_delta_) {
      best_ = score;
      best_epoch_ = epoch_;
      stale_ = 0;
      return true;
    }
    ++stale_;
    return false;
  }

  bool should_stop() const { return stale_ >= patience_; }
  double best() const { return best_; }
  std::size_t best_epoch() const { return best_epoch_; }  // 1-based, 0 before any update
  std::size_t epochs() const { return epoch_; }

 private:
  std::size_t patience_;
  double min_delta_;
  double best_ = -std::numeric_limits<double>::infinity();
  std::size_t best_epoch_ = 0;
  std::size_t epoch_ = 0;
  std::size_t stale_ = 0;
};

}  // namespace deepcva::eval
